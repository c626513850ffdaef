"""Command-line front end, JSON reports, and the sequence-depth toy.

Two console scripts: `depth` (subcommands matrix, symmetric, group, taft,
quantum, hopf, seq) and `hochschild` (subcommand check).  Every run prints
one JSON report with sorted keys, echoing the sha256 of each input so runs
are reproducible byte for byte; `--out` additionally writes the report to
a file.

Exit codes: 0 success, 2 validation error (including malformed JSON, with
line/column in the message), 3 unsupported decomposition, 4 cap exceeded.
The caps can be overridden by the DEPTHLAB_CAPS environment variable, a
JSON object; unknown keys are rejected.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import __version__
from .errors import CapExceeded, DecompositionUnsupported, ValidationError
from . import burnside as burnside_mod
from . import hochschild as hochschild_mod
from . import hopf_algebra as hopf_mod
from . import matrix_depth as matrix_mod
from . import perm_group as perm_mod
from .exact_matrix import int_matrix_from_json, matrix_to_json

DEFAULT_CAPS = {
    "group_order": 100_000,
    "tensor_degree": 8,
    "matrix_power": 4096,
    "solver_unknowns": 4096,
    "module_dim": 4000,
}

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_UNSUPPORTED = 3
EXIT_CAP = 4


@dataclass
class RunConfig:
    """One resolved invocation: command, inputs, output, caps, parallelism."""

    command: str
    params: dict = field(default_factory=dict)
    inputs: dict = field(default_factory=dict)  # name -> path
    output: Optional[str] = None
    caps: dict = field(default_factory=lambda: dict(DEFAULT_CAPS))
    parallelism: int = 1

    def __post_init__(self):
        for key, value in self.caps.items():
            if key not in DEFAULT_CAPS:
                raise ValidationError(f"unknown cap key {key!r}")
            if not isinstance(value, int) or value < 1:
                raise ValidationError(f"cap {key!r} must be a positive integer")
        for key in DEFAULT_CAPS:
            self.caps.setdefault(key, DEFAULT_CAPS[key])
        if not isinstance(self.parallelism, int) or self.parallelism < 1:
            raise ValidationError("parallelism must be a positive integer")


def caps_from_env(base: Optional[dict] = None) -> dict:
    caps = dict(base or DEFAULT_CAPS)
    raw = os.environ.get("DEPTHLAB_CAPS")
    if raw:
        try:
            overrides = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ValidationError(
                f"DEPTHLAB_CAPS is not valid JSON (line {exc.lineno}, column {exc.colno})"
            )
        if not isinstance(overrides, dict):
            raise ValidationError("DEPTHLAB_CAPS must be a JSON object")
        for key, value in overrides.items():
            if key not in DEFAULT_CAPS:
                raise ValidationError(f"unknown cap key {key!r} in DEPTHLAB_CAPS")
            caps[key] = value
    return caps


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}")
    try:
        return json.loads(text), hashlib.sha256(text.encode()).hexdigest()
    except json.JSONDecodeError as exc:
        raise ValidationError(
            f"{path} is not valid JSON: {exc.msg} at line {exc.lineno}, column {exc.colno}"
        )


def _params_hash(params: dict) -> str:
    canon = json.dumps(params, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()


# -- the sequence-depth toy ---------------------------------------------------

def prime_support(n: int) -> frozenset[int]:
    if n < 1:
        raise ValidationError("sequence terms must be positive integers")
    out = set()
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            out.add(p)
            while m % p == 0:
                m //= p
        p += 1 if p == 2 else 2
    if m > 1:
        out.add(m)
    return frozenset(out)


def sequence_depth(terms, probe: int):
    """Least m with: each of the next `probe` terms divides a power of the
    product of everything before it.

    A term divides a power of a product exactly when its prime support is
    contained in the union of the supports so far, so no exponent search
    is needed.  Returns the least such m (testing m up to
    len(terms) - probe), or the string "exceeds probe".
    """
    terms = list(terms)
    if not terms:
        raise ValidationError("empty sequence")
    if probe < 1:
        raise ValidationError("probe must be a positive integer")
    supports = [prime_support(int(t)) for t in terms]
    prefix: list[frozenset] = []
    acc: frozenset = frozenset()
    for s in supports:
        prefix.append(acc)
        acc = acc | s
    # prefix[t] = union of supports of terms[0..t-1]
    prefix.append(acc)
    max_start = len(terms) - probe
    for m in range(0, max_start + 1):
        if all(supports[m + j] <= prefix[m + j] for j in range(probe)):
            return m
    return "exceeds probe"


# -- report helpers -----------------------------------------------------------

def _class_legend(chains: list) -> tuple[list, dict]:
    keys = sorted({key for chain in chains for labels in chain for key in labels})
    legend = []
    label_of = {}
    for t, key in enumerate(keys):
        label_of[key] = f"C{t}"
        legend.append({"label": f"C{t}", "subgroup_order": key[1]})
    return legend, label_of


def _chain_json(chain: list, label_of: dict) -> list:
    return [sorted(label_of[k] for k in labels) for labels in chain]


# -- command implementations ---------------------------------------------------

def _cmd_matrix(config: RunConfig) -> dict:
    obj, digest = _load_json(config.inputs["matrix"])
    m = int_matrix_from_json(obj)
    data = matrix_mod.InclusionData(
        matrix=m,
        triv_row=config.params.get("triv_row"),
        dim_vector=tuple(config.params["dims"]) if config.params.get("dims") else None,
        index=Fraction(config.params["index"]) if config.params.get("index") else None,
    )
    results = {
        "odd_depth": matrix_mod.min_odd_depth(data).to_json(),
        "h_depth": matrix_mod.min_h_depth(data).to_json(),
    }
    try:
        results["bipartite_odd_depth"] = matrix_mod.bipartite_odd_depth(data).to_json()
    except ValidationError as exc:
        results["bipartite_odd_depth"] = {"error": str(exc)}
    if data.triv_row is not None:
        results["module_depth_over_big"] = matrix_mod.module_depth_H(data).to_json()
    if data.dim_vector is not None and data.index is not None:
        results["perron_check"] = matrix_mod.check_perron(data)
    return {"inputs": {"matrix": digest}, "results": results}


def _cmd_symmetric(config: RunConfig) -> dict:
    n = config.params["n"]
    data = matrix_mod.branch_matrix(n)
    results = {
        "n": n,
        "matrix": matrix_to_json(data.matrix),
        "odd_depth": matrix_mod.min_odd_depth(data).to_json(),
        "h_depth": matrix_mod.min_h_depth(data).to_json(),
        "module_depth_over_big": matrix_mod.module_depth_H(data).to_json(),
        "bipartite_odd_depth": matrix_mod.bipartite_odd_depth(data).to_json(),
        "perron_check": matrix_mod.check_perron(data),
    }
    return {"inputs": {"params": _params_hash({"n": n})}, "results": results}


def _cmd_group(config: RunConfig) -> dict:
    gobj, gdigest = _load_json(config.inputs["group"])
    hobj, hdigest = _load_json(config.inputs["subgroup"])
    cap = config.caps["group_order"]
    G = perm_mod.group_from_json(gobj, cap=cap)
    H = perm_mod.group_from_json(hobj, cap=cap)
    if not perm_mod.is_subgroup(G, H):
        raise ValidationError("the second group is not a subgroup of the first")
    bounds = burnside_mod.subgroup_depth_bound(G, H)
    over = config.params.get("over", "sub")
    chain = bounds.chain_over_subgroup if over == "sub" else bounds.chain_over_group
    legend, label_of = _class_legend([bounds.chain_over_subgroup,
                                      bounds.chain_over_group])
    profile, eta_report = burnside_mod.eta_profile(G, H)
    classes_i = burnside_mod.conjugate_intersection_classes(G, H)
    results = {
        "group_order": G.order,
        "subgroup_order": H.order,
        "over": over,
        "module_depth_bound": (
            burnside_mod.burnside_module_depth_bound(
                G, H, over=H if over == "sub" else None,
                degree_cap=config.caps["tensor_degree"],
            )[0].to_json()
        ),
        "constituent_chain": _chain_json(chain, label_of),
        "class_legend": legend,
        "subgroup_depth": bounds.to_json(),
        "intersection_class_count": len(classes_i),
        "eta_profile": {
            "values": list(profile.values),
            "class_sizes": list(profile.class_sizes),
            "distinct_values": profile.m,
            "corefree": profile.corefree,
        },
    }
    if eta_report is not None:
        results["eta_bound"] = eta_report.to_json()
    return {"inputs": {"group": gdigest, "subgroup": hdigest}, "results": results}


def _cmd_taft(config: RunConfig) -> dict:
    n = config.params["n"]
    H, R = hopf_mod.taft(n)
    V = hopf_mod.quotient_module_V(H, R)
    d = hopf_mod.module_depth(V, over=R, degree_cap=config.caps["tensor_degree"],
                              dim_cap=config.caps["module_dim"])
    interval = hopf_mod.depth_interval(H, R, V)
    normality = hopf_mod.integral_and_normality(H, R)
    results = {
        "n": n,
        "dim": H.dim,
        "dim_V": V.dim,
        "module_depth_over_subalgebra": d.to_json(),
        "depth_interval": interval.to_json(),
        "integral_is_normal": normality.is_normal,
        "quotient_is_integral_image": normality.v_iso_ok,
    }
    return {"inputs": {"params": _params_hash({"n": n})}, "results": results}


def _cmd_quantum(config: RunConfig) -> dict:
    d = config.params["d"]
    H, R = hopf_mod.small_quantum(d)
    V = hopf_mod.quotient_module_V(H, R)
    rad = hopf_mod.radical_and_chevalley(R)
    results = {
        "d": d,
        "dim": H.dim,
        "dim_subalgebra": R.dim,
        "dim_V": V.dim,
        "radical_dim_subalgebra": len(rad.radical_basis),
    }
    depth_report = hopf_mod.module_depth(
        V, over=R, degree_cap=config.caps["tensor_degree"],
        dim_cap=config.caps["module_dim"],
    )
    results["module_depth_over_subalgebra"] = depth_report.to_json()
    results["depth_interval"] = hopf_mod.depth_interval(H, R, V).to_json()
    return {"inputs": {"params": _params_hash({"d": d})}, "results": results}


def _cmd_hopf(config: RunConfig) -> dict:
    aobj, adigest = _load_json(config.inputs["algebra"])
    sobj, sdigest = _load_json(config.inputs["subalgebra"])
    H = hopf_mod.hopf_from_json(aobj)
    R = hopf_mod.subalgebra_from_json(H, sobj)
    V = hopf_mod.quotient_module_V(H, R)
    d = hopf_mod.module_depth(V, over=R, degree_cap=config.caps["tensor_degree"],
                              dim_cap=config.caps["module_dim"])
    interval = hopf_mod.depth_interval(H, R, V)
    normality = hopf_mod.integral_and_normality(H, R)
    results = {
        "dim": H.dim,
        "dim_subalgebra": R.dim,
        "dim_V": V.dim,
        "module_depth_over_subalgebra": d.to_json(),
        "depth_interval": interval.to_json(),
        "integral_is_normal": normality.is_normal,
    }
    return {"inputs": {"algebra": adigest, "subalgebra": sdigest},
            "results": results}


def _cmd_seq(config: RunConfig) -> dict:
    if "terms_file" in config.inputs:
        obj, digest = _load_json(config.inputs["terms_file"])
        if not isinstance(obj, list):
            raise ValidationError("terms file must hold a JSON list of integers")
        terms = obj
        inputs = {"terms": digest}
    else:
        terms = config.params["terms"]
        inputs = {"params": _params_hash({"terms": terms})}
    probe = config.params["probe"]
    value = sequence_depth(terms, probe)
    return {"inputs": inputs,
            "results": {"probe": probe, "count": len(terms), "depth": value}}


_HOCHSCHILD_PAIRS = ("taft2", "taft3", "taft4", "taft5", "taft6",
                     "quantum2", "quantum3", "z2z4")


def _resolve_pair(tag: str):
    if tag.startswith("taft"):
        return hopf_mod.taft(int(tag[4:]))
    if tag.startswith("quantum"):
        return hopf_mod.small_quantum(int(tag[7:]))
    if tag == "z2z4":
        Z4 = perm_mod.cyclic_group(4)
        HA = hopf_mod.group_algebra(Z4, conductor=4)
        sub = perm_mod.group_closure(4, [perm_mod.Perm((2, 3, 0, 1))])
        return HA, hopf_mod.group_subalgebra(HA, Z4, sub)
    raise ValidationError(f"unknown pair {tag!r}; choose from {_HOCHSCHILD_PAIRS}")


def _cmd_hochschild_check(config: RunConfig) -> dict:
    tag = config.params["pair"]
    module = config.params.get("module", "adjoint")
    if module != "adjoint":
        raise ValidationError("only the adjoint coefficient bimodule is available")
    max_degree = config.params.get("max_degree", 3)
    if not 0 <= max_degree <= 3:
        raise ValidationError("max-degree must be between 0 and 3")
    H, R = _resolve_pair(tag)
    M = hochschild_mod.adjoint_bimodule(H)
    cx = hochschild_mod.CochainComplex(H, R, M,
                                       unknown_cap=config.caps["solver_unknowns"])
    dims = [cx.space(n).dim for n in range(max_degree + 1)]
    diffs = [cx.differential(n) for n in range(max_degree)]
    ranks = [d.rank() for d in diffs]
    square_zero = all(diffs[i].compose_is_zero(diffs[i + 1])
                      for i in range(len(diffs) - 1))
    cohomology = []
    for n in range(max_degree):
        below = ranks[n - 1] if n >= 1 else 0
        cohomology.append(dims[n] - ranks[n] - below)
    centralizer = hochschild_mod.centralizer_dimension(H, R, M)
    results = {
        "pair": tag,
        "module": module,
        "max_degree": max_degree,
        "cochain_dims": dims,
        "differential_ranks": ranks,
        "squares_are_zero": square_zero,
        "degree0_dim": dims[0],
        "centralizer_dim": centralizer,
        "degree0_matches_centralizer": dims[0] == centralizer,
        "cohomology_dims": cohomology,
    }
    return {
        "inputs": {"params": _params_hash({"pair": tag, "max_degree": max_degree})},
        "results": results,
    }


_COMMANDS = {
    "matrix": _cmd_matrix,
    "symmetric": _cmd_symmetric,
    "group": _cmd_group,
    "taft": _cmd_taft,
    "quantum": _cmd_quantum,
    "hopf": _cmd_hopf,
    "seq": _cmd_seq,
    "hochschild-check": _cmd_hochschild_check,
}


def run(config: RunConfig) -> tuple[int, dict]:
    """Dispatch a resolved config; returns (exit code, report dict)."""
    handler = _COMMANDS.get(config.command)
    if handler is None:
        raise ValidationError(f"unknown command {config.command!r}")
    body = handler(config)
    report = {
        "command": config.command,
        "version": __version__,
        "caps": dict(sorted(config.caps.items())),
        "inputs": body.get("inputs", {}),
        "results": body["results"],
    }
    return EXIT_OK, report


def _emit(report: dict, output: Optional[str]) -> None:
    text = json.dumps(report, sort_keys=True, indent=2, default=str)
    print(text)
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")


def _execute(config_builder, argv) -> int:
    try:
        config = config_builder(argv)
        code, report = run(config)
    except SystemExit as exc:  # argparse usage error (exits 2) or --help (0)
        return int(exc.code or 0)
    except ValidationError as exc:
        print(json.dumps({"error": str(exc), "kind": "validation"}), file=sys.stderr)
        return EXIT_VALIDATION
    except DecompositionUnsupported as exc:
        print(json.dumps({"error": str(exc), "kind": "unsupported-decomposition"}),
              file=sys.stderr)
        return EXIT_UNSUPPORTED
    except CapExceeded as exc:
        print(json.dumps({"error": str(exc), "kind": "cap-exceeded"}), file=sys.stderr)
        return EXIT_CAP
    _emit(report, config.output)
    return code


def _int_list(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ValidationError(f"expected a comma-separated integer list, got {text!r}")


def _build_depth_config(argv) -> RunConfig:
    parser = argparse.ArgumentParser(
        prog="depth", description="exact subalgebra-depth computations",
        exit_on_error=False,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("matrix", exit_on_error=False)
    p.add_argument("--file", required=True)
    p.add_argument("--triv-row", type=int, default=None)
    p.add_argument("--dims", default=None, help="JSON file with the dimension vector")
    p.add_argument("--index", default=None, help="index [A:B] as an exact rational")
    p.add_argument("--out", default=None)

    p = sub.add_parser("symmetric", exit_on_error=False)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out", default=None)

    p = sub.add_parser("group", exit_on_error=False)
    p.add_argument("--group", required=True)
    p.add_argument("--subgroup", required=True)
    p.add_argument("--over", choices=("sub", "big"), default="sub")
    p.add_argument("--out", default=None)

    p = sub.add_parser("taft", exit_on_error=False)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out", default=None)

    p = sub.add_parser("quantum", exit_on_error=False)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--out", default=None)

    p = sub.add_parser("hopf", exit_on_error=False)
    p.add_argument("--file", required=True)
    p.add_argument("--subalgebra", required=True)
    p.add_argument("--out", default=None)

    p = sub.add_parser("seq", exit_on_error=False)
    p.add_argument("--terms", default=None, help="comma-separated positive integers")
    p.add_argument("--file", default=None, help="JSON list of positive integers")
    p.add_argument("--probe", type=int, required=True)
    p.add_argument("--out", default=None)

    try:
        args = parser.parse_args(argv)
    except argparse.ArgumentError as exc:
        raise ValidationError(str(exc))

    caps = caps_from_env()
    if args.command == "matrix":
        params = {"triv_row": args.triv_row}
        if args.dims:
            obj, _ = _load_json(args.dims)
            if not isinstance(obj, list):
                raise ValidationError("dims file must hold a JSON list")
            params["dims"] = obj
        if args.index is not None:
            params["index"] = args.index
        return RunConfig("matrix", params=params, inputs={"matrix": args.file},
                         output=args.out, caps=caps)
    if args.command == "symmetric":
        return RunConfig("symmetric", params={"n": args.n}, output=args.out, caps=caps)
    if args.command == "group":
        return RunConfig("group", params={"over": args.over},
                         inputs={"group": args.group, "subgroup": args.subgroup},
                         output=args.out, caps=caps)
    if args.command == "taft":
        return RunConfig("taft", params={"n": args.n}, output=args.out, caps=caps)
    if args.command == "quantum":
        return RunConfig("quantum", params={"d": args.d}, output=args.out, caps=caps)
    if args.command == "hopf":
        return RunConfig("hopf", inputs={"algebra": args.file,
                                         "subalgebra": args.subalgebra},
                         output=args.out, caps=caps)
    if args.command == "seq":
        if (args.terms is None) == (args.file is None):
            raise ValidationError("give exactly one of --terms or --file")
        params = {"probe": args.probe}
        inputs = {}
        if args.terms is not None:
            params["terms"] = _int_list(args.terms)
        else:
            inputs["terms_file"] = args.file
        return RunConfig("seq", params=params, inputs=inputs, output=args.out,
                         caps=caps)
    raise ValidationError(f"unknown command {args.command!r}")


def _build_hochschild_config(argv) -> RunConfig:
    parser = argparse.ArgumentParser(
        prog="hochschild", description="relative cochain complex reports",
        exit_on_error=False,
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("check", exit_on_error=False)
    p.add_argument("--pair", required=True, help="|".join(_HOCHSCHILD_PAIRS))
    p.add_argument("--module", default="adjoint")
    p.add_argument("--max-degree", type=int, default=3)
    p.add_argument("--out", default=None)
    try:
        args = parser.parse_args(argv)
    except argparse.ArgumentError as exc:
        raise ValidationError(str(exc))
    if args.command != "check":
        raise ValidationError(f"unknown command {args.command!r}")
    return RunConfig(
        "hochschild-check",
        params={"pair": args.pair, "module": args.module,
                "max_degree": args.max_degree},
        output=args.out,
        caps=caps_from_env(),
    )


def main_depth(argv=None) -> int:
    return _execute(_build_depth_config,
                    sys.argv[1:] if argv is None else argv)


def main_hochschild(argv=None) -> int:
    return _execute(_build_hochschild_config,
                    sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main_depth())
