"""Command line entry point: ``ordlab <area> <command> ...``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import ConfigError, OrdlabError
from .groups import Basic, converges, parse_element, verify_group_axioms, Counterexample
from .lab import DEFAULT_UNIVERSE, EXIT_CONFIG, EXIT_FAIL, EXIT_OK, emit_report, load_config, run_suite, sample_ordinals, write_report
from .matrix import rho1_provider, rho_provider, verify_axioms
from .omegasets import Finite, INFINITE, finiteness, member, parse_set, parse_set_file
from .ordinals import fmt, parse
from .report import plain
from .towers import (
    GapMatrix, PreGap, Splits, Tower, TowerMatrix, build_tower, dump_manifest, hausdorff_check,
    load_manifest, splitter_check, validate_pregap, validate_tower,
)
from .trees import (
    TreeMatrix, bundled_fragment, coherence_check, gen_rho2_node, linf_F_member, linf_meet,
    linf_witness_k, load_tree, norm_diff, parse_node, two_parent_mutant, verify_tree_matrix,
)
from .walks import get_function, sublevel, walk_trace


def _out(obj) -> None:
    print(json.dumps(plain(obj), sort_keys=True, indent=2, ensure_ascii=False))


def _ords(text: str):
    return [parse(p) for p in text.split(",") if p.strip()]


def _xis(text: str) -> range:
    lo, _, hi = text.partition("..")
    return range(int(lo), int(hi or lo) + 1)


def _tree(ref: str):
    if ref == "builtin:fragment":
        return bundled_fragment()
    if ref == "builtin:mutant":
        return two_parent_mutant()
    return load_tree(ref)


def _provider(ref: str):
    if ref == "rho":
        return rho_provider()
    if ref == "rho1":
        return rho1_provider()
    kind, _, path = ref.partition(":")
    if kind == "tree":
        return TreeMatrix(_tree(path))
    if kind in ("tower", "gap"):
        fam = load_manifest(path)
        if kind == "tower" and isinstance(fam, Tower):
            return TowerMatrix(fam)
        if kind == "gap" and isinstance(fam, PreGap):
            return GapMatrix(fam)
        raise ConfigError(f"{path} is not a {kind} manifest")
    raise ConfigError(f"unknown provider {ref!r}")


def _report_exit(rep) -> int:
    _out(rep)
    return EXIT_OK if rep.ok else EXIT_FAIL


# -- walk -----------------------------------------------------------------------


def cmd_walk_eval(a) -> int:
    print(get_function(a.fn)(parse(a.alpha), parse(a.beta), None))
    return EXIT_OK


def cmd_walk_sublevel(a) -> int:
    print(", ".join(fmt(x) for x in sorted(sublevel(a.fn, parse(a.alpha), a.c))))
    return EXIT_OK


def cmd_walk_trace(a) -> int:
    print(", ".join(fmt(x) for x in walk_trace(parse(a.alpha), parse(a.beta))))
    return EXIT_OK


# -- matrix / group ---------------------------------------------------------------


def _universe(ref: str | None):
    """A file with one ordinal per line, ``sampler:<seed>:<exponent bound>:<coefficient bound>:<count>``, or the default mix."""
    if not ref:
        return DEFAULT_UNIVERSE
    if ref.startswith("sampler:"):
        seed, eb, cb, n = ref.split(":")[1:]
        return sample_ordinals(int(seed), parse(eb), int(cb), int(n))
    lines = Path(ref).read_text().splitlines()
    return sorted({parse(x.split("#", 1)[0]) for x in lines if x.split("#", 1)[0].strip()})


def _own_universe(p):
    """Structure-backed providers default to their own nodes or indices."""
    if isinstance(p, TreeMatrix):
        return sorted(p.t.nodes)
    if isinstance(p, TowerMatrix):
        return p.t.indices
    if isinstance(p, GapMatrix):
        return p.g.indices
    return DEFAULT_UNIVERSE


def cmd_matrix_verify(a) -> int:
    p = _provider(a.provider)
    uni = _universe(a.universe) if a.universe else _own_universe(p)
    rep = verify_axioms(p, uni, range(a.xi_max + 1), seed=a.seed, max_pairs=a.max_pairs)
    if a.out:
        Path(a.out).write_text(json.dumps(rep.to_plain(), sort_keys=True, indent=2, ensure_ascii=False) + "\n")
    return _report_exit(rep)


def cmd_group_verify(a) -> int:
    p = _provider(a.provider)
    elems = [parse_element(e) for e in Path(a.elements).read_text().split("\n") if e.strip()] if a.elements else []
    alphas = _ords(a.alphas)
    base = [Basic(x, al, p) for al in alphas for x in _xis(a.xi)]
    return _report_exit(verify_group_axioms(base, elems, seed=a.seed, probe_universe=_universe(a.probes) if a.probes else ()))


def cmd_group_converge(a) -> int:
    p = _provider(a.provider)
    seq = [parse_element(x) for x in Path(a.seq).read_text().splitlines() if x.strip()]
    xi, _, alpha = a.nbhd.partition(",")
    res = converges(seq, Basic(int(xi), parse(alpha), p))
    if isinstance(res, Counterexample):
        _out({"converges": False, "violations": list(res.indices)})
        return EXIT_FAIL
    _out({"converges": True, "tail_from": res.index})
    return EXIT_OK


# -- trees ---------------------------------------------------------------------


def cmd_tree_verify(a) -> int:
    t = _tree(a.tree)
    return _report_exit(verify_tree_matrix(t, t.levels(), a.xi_max))


def cmd_tree_linf(a) -> int:
    nodes = [parse_node(x) for x in a.nodes]
    op = a.op
    if op == "gen":
        _out(gen_rho2_node(parse(a.beta), a.alpha))
    elif op == "norm":
        _out(norm_diff(*nodes))
    elif op == "member":
        _out(linf_F_member(nodes[0], nodes[1], a.n))
    elif op == "witness":
        _out(linf_witness_k(nodes[0], nodes[1], a.m, a.n))
    elif op == "meet":
        nd, k = linf_meet(nodes[0], a.m, nodes[1], a.n)
        _out({"node": nd, "k": k})
    elif op == "coherence":
        _out(sorted(coherence_check(*nodes)))
    return EXIT_OK


# -- sets / towers / gaps ------------------------------------------------------------


def _set_env(path: str | None) -> dict:
    return parse_set_file(Path(path).read_text()) if path else {}


def cmd_sets_eval(a) -> int:
    env = _set_env(a.file)
    e = env[a.expr] if a.expr in env else parse_set(a.expr, env)
    out = {"expr": str(e)}
    if a.member is not None:
        out["member"] = {x: member(e, x) for x in a.member}
    r = finiteness(e)
    if isinstance(r, Finite):
        out["finite"] = True
        out["elements"] = sorted(r.elems)
    elif r is INFINITE:
        out["finite"] = False
        out["first"] = [x for x in range(a.show) if member(e, x)]
    else:
        out["finite"] = "undecided"
        out["reason"] = r.reason
    _out(out)
    return EXIT_OK


def cmd_tower_build(a) -> int:
    t = build_tower(_ords(a.indices), seed=a.seed)
    text = dump_manifest(t)
    if a.out:
        Path(a.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_tower_verify(a) -> int:
    fam = load_manifest(a.manifest)
    if not isinstance(fam, Tower):
        raise ConfigError(f"{a.manifest} is not a tower manifest")
    return _report_exit(validate_tower(fam))


def _gap(path):
    fam = load_manifest(path)
    if not isinstance(fam, PreGap):
        raise ConfigError(f"{path} is not a pre-gap manifest")
    return fam


def cmd_gap_verify(a) -> int:
    return _report_exit(validate_pregap(_gap(a.manifest)))


def cmd_gap_split(a) -> int:
    g = _gap(a.manifest)
    env = _set_env(a.sets)
    c = env[a.candidate] if a.candidate in env else parse_set(a.candidate, env)
    res = splitter_check(c, g)
    if isinstance(res, Splits):
        _out({"splits": True, "levels": res.levels})
        return EXIT_OK
    _out({"splits": False, "index": res.index, "side": res.side})
    return EXIT_FAIL


def cmd_gap_hausdorff(a) -> int:
    fam = load_manifest(a.manifest)
    _out(sorted(hausdorff_check(fam, a.n, parse(a.beta))))
    return EXIT_OK


# -- lab ---------------------------------------------------------------------------


def cmd_lab_run(a) -> int:
    cfg = load_config(a.config)
    if a.seed is not None:
        cfg.seed = a.seed
    rep = run_suite(cfg, jobs=a.jobs, only=a.only)
    out_dir = a.out or cfg.output.get("dir")
    fmt_ = a.format or cfg.output.get("format", "json")
    if out_dir:
        for p in write_report(rep, out_dir, (fmt_,)):
            print(p, file=sys.stderr)
    else:
        sys.stdout.write(emit_report(rep, fmt_).decode())
    return rep.exit_code


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ordlab", description="Walks on ordinals, matrices and the group topologies they induce.")
    areas = ap.add_subparsers(dest="area", required=True)

    walk = areas.add_parser("walk").add_subparsers(dest="cmd", required=True)
    p = walk.add_parser("eval", help="evaluate rho, rho1, rho2 or rhobar")
    p.add_argument("--fn", default="rho", choices=("rho", "rho1", "rho2", "rhobar"))
    p.add_argument("--alpha", required=True)
    p.add_argument("--beta", required=True)
    p.set_defaults(func=cmd_walk_eval)
    p = walk.add_parser("sublevel", help="{xi <= alpha : fn(xi, alpha) <= c}")
    p.add_argument("--alpha", required=True)
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--fn", default="rho", choices=("rho", "rho1"))
    p.set_defaults(func=cmd_walk_sublevel)
    p = walk.add_parser("trace", help="the walk from beta down to alpha")
    p.add_argument("--alpha", required=True)
    p.add_argument("--beta", required=True)
    p.set_defaults(func=cmd_walk_trace)

    matrix = areas.add_parser("matrix").add_subparsers(dest="cmd", required=True)
    p = matrix.add_parser("verify", help="check G1-G4 on a finite universe")
    p.add_argument("--provider", default="rho", help="rho | rho1 | tree:<file|builtin:fragment> | tower:<manifest> | gap:<manifest>")
    p.add_argument("--universe", help="ordinal file or sampler:<seed>:<exp bound>:<coef bound>:<count> (default: 0..29 plus w, w+1, w*2, w^2, w^w)")
    p.add_argument("--xi-max", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-pairs", type=int)
    p.add_argument("--out", help="also write the report JSON here")
    p.set_defaults(func=cmd_matrix_verify)

    group = areas.add_parser("group").add_subparsers(dest="cmd", required=True)
    p = group.add_parser("verify", help="check the neighborhood-base conditions")
    p.add_argument("--provider", default="rho")
    p.add_argument("--elements", help="file with one element per line, e.g. {1,w}")
    p.add_argument("--alphas", default="w,w*2,w^2")
    p.add_argument("--xi", default="0..4")
    p.add_argument("--probes", help="universe of extra probe ordinals (file or sampler:...)")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_group_verify)
    p = group.add_parser("converge", help="tail of a sequence inside U_xi(alpha)")
    p.add_argument("--seq", required=True, help="file with one element per line")
    p.add_argument("--nbhd", required=True, help='"xi,alpha"')
    p.add_argument("--provider", default="rho")
    p.set_defaults(func=cmd_group_converge)

    tree = areas.add_parser("tree").add_subparsers(dest="cmd", required=True)
    p = tree.add_parser("verify", help="check a tree fragment")
    p.add_argument("tree", help="file or builtin:fragment / builtin:mutant")
    p.add_argument("--xi-max", type=int, default=3)
    p.set_defaults(func=cmd_tree_verify)
    p = tree.add_parser("linf", help="finite-sequence node operations")
    p.add_argument("--op", required=True, choices=("gen", "norm", "member", "witness", "meet", "coherence"))
    p.add_argument("nodes", nargs="*", help="nodes like (1,2,3)")
    p.add_argument("--beta")
    p.add_argument("--alpha", type=int)
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--n", type=int, default=0)
    p.set_defaults(func=cmd_tree_linf)

    sets = areas.add_parser("sets").add_subparsers(dest="cmd", required=True)
    p = sets.add_parser("eval", help="decide finiteness and membership")
    p.add_argument("expr", help="an expression or a name defined in --file")
    p.add_argument("--file")
    p.add_argument("--member", type=int, nargs="*")
    p.add_argument("--show", type=int, default=20)
    p.set_defaults(func=cmd_sets_eval)

    tower = areas.add_parser("tower").add_subparsers(dest="cmd", required=True)
    p = tower.add_parser("build")
    p.add_argument("--indices", required=True, help="comma-separated ascending ordinals")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_tower_build)
    p = tower.add_parser("verify")
    p.add_argument("manifest")
    p.set_defaults(func=cmd_tower_verify)

    gap = areas.add_parser("gap").add_subparsers(dest="cmd", required=True)
    p = gap.add_parser("verify")
    p.add_argument("manifest")
    p.set_defaults(func=cmd_gap_verify)
    p = gap.add_parser("split")
    p.add_argument("manifest")
    p.add_argument("candidate")
    p.add_argument("--sets", help="set file defining names used by the candidate")
    p.set_defaults(func=cmd_gap_split)
    p = gap.add_parser("hausdorff")
    p.add_argument("manifest")
    p.add_argument("n", type=int)
    p.add_argument("beta")
    p.set_defaults(func=cmd_gap_hausdorff)

    lab = areas.add_parser("lab").add_subparsers(dest="cmd", required=True)
    p = lab.add_parser("run", help="run a suite config (YAML file or builtin:<suite>)")
    p.add_argument("config")
    p.add_argument("--out")
    p.add_argument("--format", choices=("json", "csv", "text"))
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--seed", type=int)
    p.add_argument("--only", action="append")
    p.set_defaults(func=cmd_lab_run)
    return ap


def main(argv: list[str] | None = None) -> int:
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (OrdlabError, ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
