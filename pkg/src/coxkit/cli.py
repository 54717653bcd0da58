"""
``coxkit`` command-line front end.

Every command prints one JSON document (sorted keys) and returns
0 when decided, 1 on invalid input, 2 when inconclusive at the given bounds.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from pathlib import Path

from . import building as bld
from . import quasimorphism as qm
from .classify import Kind, classify_component, components, is_virtually_abelian, shape
from .coxeter import BallCache, CoxeterError, CoxeterSystem, parse_system
from .parabolic import coxeter_element, is_essential, parabolic_closure
from .rankone import (Status, centralizer_growth, equivalence_witness, inequivalent_pair, is_rank_one,
                      reversibility_search, z2_witness_search)

EXIT_OK, EXIT_INVALID, EXIT_INCONCLUSIVE = 0, 1, 2


class InputError(Exception):
    pass


# ----------------------------------------------------------------------
# plumbing


def _write_atomic(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(report: dict, args) -> str:
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if args.out:
        _write_atomic(Path(args.out), text)
    sys.stdout.write(text)
    return text


def _load_text(path) -> str:
    if not path:
        raise InputError("--system is required")
    p = Path(path)
    if not p.is_file():
        raise InputError(f"system file not found: {path}")
    return p.read_text()


def load_system(path) -> CoxeterSystem:
    text = _load_text(path)
    doc = json.loads(text) if text.strip().startswith("{") else None
    if isinstance(doc, dict) and "type" in doc and "m" not in doc:
        text = json.dumps(doc["type"])
    return parse_system(text, name=Path(path).stem)


def ball_cache_path(system_path, W: CoxeterSystem) -> Path:
    p = Path(system_path)
    return p.with_name(f".{p.stem}.ball-{W.content_hash[:16]}.jsonl")


def warm_ball(W: CoxeterSystem, system_path, radius: int):
    """Load a persisted ball beside the system file, or build and persist it."""
    path = ball_cache_path(system_path, W)
    balls = W._cache.setdefault("balls", {})
    if path.is_file():
        try:
            ball = BallCache.loads(W, path.read_text())
        except (CoxeterError, ValueError, KeyError):
            ball = None
        if ball is not None and ball.radius >= radius:
            balls[(ball.radius, ball.budget)] = ball
            return ball
    ball = W.ball(radius)
    try:
        _write_atomic(path, ball.dumps())
    except OSError:
        pass
    return ball


def _words(args, n, defaults):
    given = list(args.word or [])
    if len(given) > n:
        raise InputError(f"expected at most {n} --word values")
    return given + defaults[len(given):]


def _elem(W, text):
    if text is None:
        return coxeter_element(W)
    if text.strip() in ("", "1", "e"):
        return W.identity
    return W.normal_form(text)


def _bounds(args, *names) -> dict:
    return {k: getattr(args, k) for k in names}


def _base(W: CoxeterSystem, command: str) -> dict:
    return {"command": command, "system": {"name": W.name, "generators": list(W.generators),
                                           "hash": W.content_hash}}


# ----------------------------------------------------------------------
# commands


def cmd_classify(args):
    W = load_system(args.system)
    rep = _base(W, "classify")
    sh = shape(W)
    comps = components(W)
    rep["shape"] = sh.to_json(W)
    rep["irreducible"] = len(comps) == 1
    rep["label"] = str(classify_component(W, comps[0])) if len(comps) == 1 else None
    rep["virtually_abelian"] = is_virtually_abelian(W)
    rep["subsets"] = [{"J": W.names(W.subset(J)), "shape": shape(W, W.subset(J)).to_json(W)}
                      for J in (args.subset or [])]
    return EXIT_OK, rep


def cmd_nf(args):
    W = load_system(args.system)
    (word,) = _words(args, 1, [None])
    if word is None:
        raise InputError("nf needs --word")
    w = _elem(W, word)
    letters = W.indices(word) if word.strip() not in ("", "1", "e") else ()
    rep = _base(W, "nf")
    rep.update({"word": word, "normal_form": str(w), "length": w.length,
                "input_reduced": W.is_reduced(letters)})
    return EXIT_OK, rep


def cmd_pc(args):
    W = load_system(args.system)
    (word,) = _words(args, 1, [None])
    w = _elem(W, word)
    P = parabolic_closure(w)
    rep = _base(W, "pc")
    rep.update({"element": str(w), "closure": P.to_json(), "standard": P.conjugator.is_identity(),
                "closure_shape": shape(W, P.J).to_json(W) if P.J else None})
    return EXIT_OK, rep


def cmd_essential(args):
    W = load_system(args.system)
    (word,) = _words(args, 1, [None])
    w = _elem(W, word)
    rep = _base(W, "essential")
    rep.update({"element": str(w), "essential": is_essential(w), "closure": parabolic_closure(w).to_json()})
    return EXIT_OK, rep


def cmd_rank1(args):
    W = load_system(args.system)
    (word,) = _words(args, 1, [None])
    g = _elem(W, word)
    dec = is_rank_one(g)
    rep = _base(W, "rank1")
    rep.update({"element": str(g), "decision": dec.to_json(W), "bounds": _bounds(args, "radius")})
    if dec.witness is not None:
        rep["witness_shape"] = shape(W, dec.witness).to_json(W)
    if dec.status in (Status.RANK_ONE, Status.NOT_RANK_ONE):
        warm_ball(W, args.system, args.radius)
        h = z2_witness_search(g, args.radius)
        cg = centralizer_growth(g, args.radius)
        rep["oracles"] = {"z2_witness": str(h) if h is not None else None,
                          "centralizer_shells": list(cg.shell_counts),
                          "centralizer_profile": cg.profile}
    code = EXIT_INCONCLUSIVE if dec.status is Status.INCONCLUSIVE else EXIT_OK
    return code, rep


def cmd_reversible(args):
    W = load_system(args.system)
    (word,) = _words(args, 1, [None])
    g = _elem(W, word)
    warm_ball(W, args.system, args.radius)
    wit = reversibility_search(g, args.k_max, args.radius)
    rep = _base(W, "reversible")
    rep.update({"element": str(g), "bounds": _bounds(args, "k_max", "radius"),
                "witness": None if wit is None else {"k": wit.k, "a": str(wit.a), "b": str(wit.b)}})
    return (EXIT_OK if wit else EXIT_INCONCLUSIVE), rep


def cmd_equiv(args):
    W = load_system(args.system)
    w1, w2 = _words(args, 2, [None, None])
    if w2 is None:
        raise InputError("equiv needs two --word values")
    g1, g2 = _elem(W, w1), _elem(W, w2)
    warm_ball(W, args.system, args.radius)
    wit = equivalence_witness(g1, g2, args.radius, args.horizon)
    rep = _base(W, "equiv")
    rep.update({"elements": [str(g1), str(g2)], "bounds": _bounds(args, "radius", "horizon")})
    if wit is None:
        rep["witness"] = None
    else:
        cp = wit.conjugate_power
        rep["witness"] = {"a": str(wit.a), "b": str(wit.b), "horizon": wit.horizon,
                          "conjugate_power": None if cp is None else {"p": cp[0], "h": str(cp[1])}}
    return (EXIT_OK if wit else EXIT_INCONCLUSIVE), rep


def cmd_pair(args):
    W = load_system(args.system)
    warm_ball(W, args.system, args.radius)
    ps = inequivalent_pair(W, args.radius, args.horizon)
    rep = _base(W, "pair")
    rep["search"] = ps.to_json()
    return (EXIT_INCONCLUSIVE if ps.inconclusive else EXIT_OK), rep


def _load_building(path, thickness):
    text = _load_text(path)
    doc = json.loads(text)
    if "type" in doc:
        B = bld.parse_building(text)
        if thickness is not None:
            B = bld.GraphProductBuilding(B.type, thickness)
        return B
    W = parse_system(text, name=Path(path).stem)
    if W.is_right_angled:
        return bld.GraphProductBuilding(W, thickness if thickness is not None else 3)
    return bld.ThinBuilding(W)


def cmd_building_check(args):
    B = _load_building(args.system, args.thickness)
    W = B.type
    rep = _base(W, "building-check")
    thin = isinstance(B, bld.ThinBuilding)
    finite = thin and W.ball(args.radius).saturated
    if finite:
        sample = list(bld.exhaustive_triples(B, args.radius))
        mode = "exhaustive"
    else:
        sample = list(bld.sampled_triples(B, args.samples, args.radius, args.seed))
        mode = "sampled"
    ax = bld.check_axioms(B, sample)
    A = bld.standard_apartment(B)
    rho = bld.retraction(A, B.base())
    chambers = {x for t in sample for x in t}
    retr_bad = sum(1 for x in chambers if B.delta(B.base(), rho(x)) != B.delta(B.base(), x))
    gate_bad = gate_total = 0
    for s in range(W.rank):
        R = bld.residue(B, B.base(), [s])
        for x in list(chambers)[:200]:
            gate_total += 1
            gate_bad += not bld.gate_holds(B, R, x)
    rep.update({"mode": mode, "building": B.to_json() if hasattr(B, "to_json") else {"thin": True},
                "bounds": _bounds(args, "radius", "samples", "seed"),
                "axioms": ax.to_json(),
                "retraction": {"chambers": len(chambers), "violations": retr_bad},
                "gate": {"checks": gate_total, "violations": gate_bad}})
    ok = ax.ok and retr_bad == 0 and gate_bad == 0
    rep["ok"] = ok
    return (EXIT_OK if ok else EXIT_INCONCLUSIVE), rep


def cmd_building_rank1(args):
    B = _load_building(args.system, args.thickness)
    if not isinstance(B, bld.GraphProductBuilding):
        raise bld.BuildingError("type is not right-angled")
    W = B.type
    (word,) = _words(args, 1, [None])
    if word is None:
        word = " ".join(B.vertex_name(i) for i in range(W.rank))
    g = B.element(word)
    dec = bld.contracting_certificate(B, g)
    rep = _base(W, "building-rank1")
    rep.update({"element": B.format(g), "projection": str(B.project(g)), "decision": dec.to_json(W)})
    code = EXIT_INCONCLUSIVE if dec.status is Status.INCONCLUSIVE else EXIT_OK
    return code, rep


def _free_rank(path):
    try:
        doc = json.loads(_load_text(path))
    except json.JSONDecodeError:
        return None
    return doc.get("free_group") if isinstance(doc, dict) else None


def cmd_qm(args):
    rank = _free_rank(args.system)
    if rank is not None:
        F = qm.free_group_model(int(rank))
        alpha, gword = _words(args, 2, ["ab", "abAB"])
        f = qm.brooks_counting(F, alpha)
        g = F.parse(gword)
        head = {"command": "qm", "system": {"free_group": int(rank)}}
    else:
        W = load_system(args.system)
        gamma_w, g_w = _words(args, 2, [None, None])
        gamma = _elem(W, gamma_w)
        g = gamma ** 2 if g_w is None else _elem(W, g_w)
        warm_ball(W, args.system, args.length_bound)
        f = qm.axis_counting(gamma, 1)
        F = f.model
        head = _base(W, "qm")
    d = qm.defect_estimate(f, args.length_bound, samples=args.samples, seed=args.seed)
    h = qm.homogenize(f, g, args.n_max, d)
    try:
        scl = qm.scl_lower_bound(f, g, d, h)
        scl_err = None
    except qm.QuasiMorphismError as exc:
        scl, scl_err = None, str(exc)
    rep = {**head, **qm.report(f, g, d, h, scl)}
    rep["bounds"] = _bounds(args, "length_bound", "n_max", "samples", "seed")
    if scl_err:
        rep["scl_error"] = scl_err
    return EXIT_OK, rep


def hypothesis_violation(W: CoxeterSystem) -> str | None:
    """None when W is irreducible, non-spherical and non-affine."""
    comps = components(W)
    if len(comps) != 1:
        return "hypothesis violated: reducible"
    kind = classify_component(W, comps[0]).kind
    if kind is Kind.SPHERICAL:
        return "hypothesis violated: spherical"
    if kind is Kind.AFFINE:
        return "hypothesis violated: affine; W is virtually abelian, so no inequivalent rank-one pair exists"
    return None


def cmd_demo_main_theorem(args):
    W = load_system(args.system)
    rep = _base(W, "demo-main-theorem")
    rep["bounds"] = _bounds(args, "radius", "horizon", "length_bound", "n_max", "samples", "seed")
    why = hypothesis_violation(W)
    if why is not None:
        rep["error"] = why
        return EXIT_INCONCLUSIVE, rep
    warm_ball(W, args.system, max(args.radius, args.length_bound))
    ps = inequivalent_pair(W, args.radius, args.horizon)
    rep["pair"] = ps.to_json()
    if ps.pair is None:
        rep["error"] = "no inequivalent rank-one pair found at bounds"
        return EXIT_INCONCLUSIVE, rep
    runs = []
    for gamma in ps.pair:
        f = qm.axis_counting(gamma, 1)
        g = gamma ** 2
        d = qm.defect_estimate(f, args.length_bound, samples=args.samples, seed=args.seed)
        h = qm.homogenize(f, g, args.n_max, d)
        scl = qm.scl_lower_bound(f, g, d, h)
        runs.append({"rank_one": is_rank_one(gamma).to_json(W), **qm.report(f, g, d, h, scl)})
    rep["quasimorphisms"] = runs
    ok = all(r["homogenization"]["value_float"] > 0 and r["scl_bound"]["lower_bound_float"] > 0
             for r in runs)
    rep["ok"] = ok
    return (EXIT_OK if ok else EXIT_INCONCLUSIVE), rep


COMMANDS = {
    "classify": cmd_classify, "nf": cmd_nf, "pc": cmd_pc, "essential": cmd_essential,
    "rank1": cmd_rank1, "reversible": cmd_reversible, "equiv": cmd_equiv, "pair": cmd_pair,
    "building-check": cmd_building_check, "building-rank1": cmd_building_rank1, "qm": cmd_qm,
    "demo-main-theorem": cmd_demo_main_theorem,
}


def _positive(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--system", help="Coxeter system or building JSON file")
    common.add_argument("--word", action="append", help="word in the generators (repeat for a second word)")
    common.add_argument("--subset", action="append", help="generator subset for classify")
    common.add_argument("--radius", type=_positive, default=6)
    common.add_argument("--horizon", type=_positive, default=6)
    common.add_argument("--k-max", type=_positive, default=3)
    common.add_argument("--length-bound", type=_positive, default=5)
    common.add_argument("--n-max", type=_positive, default=8)
    common.add_argument("--samples", type=int, default=None,
                        help="random triples (building-check, default 10000) or extra random pairs (qm, default 0)")
    common.add_argument("--thickness", type=_positive, default=None)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="also write the JSON report here (atomically)")
    common.add_argument("--threads", type=_positive, default=1,
                        help="accepted for compatibility; computation is single-threaded")
    p = argparse.ArgumentParser(prog="coxkit", description="Coxeter groups, buildings and rank-one isometries")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    try:
        if args.n_max < 4:
            raise InputError("--n-max must be >= 4")
        if args.samples is None:
            args.samples = 10_000 if args.command == "building-check" else 0
        code, report = COMMANDS[args.command](args)
    except (InputError, CoxeterError, bld.BuildingError, qm.QuasiMorphismError, json.JSONDecodeError) as exc:
        report = {"command": args.command, "error": str(exc)}
        _emit(report, args)
        return EXIT_INVALID
    _emit(report, args)
    return code


if __name__ == "__main__":
    sys.exit(main())
