"""Command-line front end.

    secondsheaf <command> --input doc.json [--out report.json] [--dot graph.dot]

Reports are JSON with sorted keys.  Exit status: 0 when every check passed
or was skipped, 1 on a failed check or internal disagreement, 2 on a bad
document or unmet precondition, 3 when a size guard trips.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time

from ._bitset import members
from .document import DocumentError, build_module, load_instance, parse_document, ring_map_from
from .errors import CapacityError, PreconditionError, StructuralError, TheoremViolation
from .generate import random_instance
from .morphisms import check_induced, mono_induced_locally_ringed, ring_hom_induced, verify_scheme
from .report import summarize
from .sheaf import StructureSheaf
from .spectra import second_spectrum
from .topology import dual_zariski
from .verification import TheoremSuite

log = logging.getLogger("secondsheaf")

COMMANDS = ("spectrum", "topology", "sections", "stalks", "verify", "scheme", "morphism",
            "export-dot", "generate")
MAX_LISTED = 256


def _open_label(U):
    return {"points": U.label(), "supp": [p.generators_label() for p in U.supp]}


# commands -----------------------------------------------------------------

def cmd_spectrum(inst, ctx):
    M = inst.module("M")
    spec = second_spectrum(M, guards=inst.guards)
    return {
        "module": M.name, "order": M.order,
        "points": [{"submodule": P.label(), "elements": list(P.submodule.elements),
                    "annihilator": P.annihilator.generators_label()} for P in spec.points],
        "primes": [p.generators_label() for p in spec.primes()],
        "faithful": spec.is_faithful(), "secondful": spec.is_secondful(),
        "psi_injective": spec.psi_is_injective(),
    }, []


def cmd_topology(inst, ctx):
    T = ctx.topology()
    R = T.ring
    result = {
        "points": [T.point_label(i) for i in range(T.n_points)],
        "opens": [T.open_set(m).label() for m in T.open_masks],
        "closed_sets": [{"points": "{" + ",".join(T.point_label(i) for i in members(c)) + "}",
                         "witness": T.closed_sets[c].label()}
                        for c in sorted(T.closed_sets, key=lambda m: (bin(m).count("1"), m))],
        "basic_opens": {R.labels[r]: T.basic_open(r).label() for r in R.elements},
        "t0_criteria": T.t0_criteria(),
        "cotop": T.is_cotop(),
    }
    recs = [T.verify_closed_family(), T.verify_base()] + T.continuous_natural_map_check()
    return result, recs


def cmd_sections(inst, ctx):
    O = ctx.sheaf()
    out = []
    for U in O.space.opens():
        S = O.sections(U)
        entry = dict(_open_label(U), order=S.order)
        entry["sections"] = list(S.labels[:MAX_LISTED])
        if S.order > MAX_LISTED:
            entry["truncated"] = True
        out.append(entry)
    recs = O.verify_sheaf_axioms()
    ctx.notices.extend(O.notices)
    return {"coefficient": O.coefficient.name, "opens": out,
            "cross_checks": O.cross_checks}, recs


def cmd_stalks(inst, ctx):
    O = ctx.sheaf()
    out = []
    for i in range(O.space.n_points):
        st = O.stalk(i)
        out.append({"point": O.space.point_label(i), "prime": st.prime.generators_label(),
                    "minimal_open": st.minimal_open.label(), "order": st.value.order,
                    "localization_order": st.localized.order,
                    "isomorphism": st.is_isomorphism})
    suite = TheoremSuite(ctx.M, ctx.N, guards=inst.guards, topology=ctx.topology())
    suite.sheaf = O
    return {"stalks": out}, [suite.stalk_iso()]


def cmd_verify(inst, ctx):
    T = ctx.topology()
    suite = TheoremSuite(ctx.M, ctx.N, guards=inst.guards, topology=T)
    suite.sheaf = ctx.sheaf()
    recs = [T.verify_closed_family(), T.verify_base()] + T.continuous_natural_map_check()
    recs += suite.sheaf.verify_sheaf_axioms()
    recs += suite.run_global()
    if "K" in inst.modules:
        ks = [inst.submodule_of_m("K")]
    else:
        ks = list(ctx.M.submodules())
    for K in ks:
        for r in suite.run_local(K):
            r.context = {"K": K.label(), "open": suite.open_for(K).label()}
            recs.append(r)
    ctx.notices.extend(suite.sheaf.notices)
    return {"hypotheses": suite.hypotheses, "submodules_checked": [K.label() for K in ks],
            "cross_checks": suite.sheaf.cross_checks}, recs


def cmd_scheme(inst, ctx):
    recs = verify_scheme(ctx.M, guards=inst.guards, topology=ctx.topology())
    return {"module": ctx.M.name}, recs


def cmd_morphism(inst, ctx):
    desc = inst.morphism
    if desc is None:
        raise DocumentError("$", "missing 'morphism'")
    kind = desc.get("kind")
    if kind in ("induced", "monomorphism"):
        name = desc.get("map")
        if name not in inst.maps:
            raise DocumentError("$.morphism.map", f"unknown map {name!r}")
        phi = inst.maps[name]
        if kind == "induced":
            _, recs = check_induced(phi, ctx.topology(), guards=inst.guards)
            return {"kind": kind, "map": name, "source": phi.source.name,
                    "target": phi.target.name}, recs
        mor = mono_induced_locally_ringed(phi, guards=inst.guards)
        X = mor.source_sheaf.space
        Y = mor.target_sheaf.space
        return {"kind": kind, "map": name,
                "point_map": {X.point_label(i): Y.point_label(j)
                              for i, j in enumerate(mor.point_map)}}, mor.records
    if kind == "ring":
        phi = ring_map_from(desc, inst.ring, inst.guards)
        if "module" not in desc:
            raise DocumentError("$.morphism", "missing 'module' over the target ring")
        N = build_module(desc["module"], phi.target, inst.guards, "$.morphism.module")
        mor = ring_hom_induced(phi, ctx.M, N, guards=inst.guards)
        X = mor.source_sheaf.space
        Y = mor.target_sheaf.space
        return {"kind": kind, "ring_map": list(phi.values),
                "point_map": {X.point_label(i): Y.point_label(j)
                              for i, j in enumerate(mor.point_map)}}, mor.records
    raise DocumentError("$.morphism.kind", f"unknown morphism kind {kind!r}")


HANDLERS = {"spectrum": cmd_spectrum, "topology": cmd_topology, "sections": cmd_sections,
            "stalks": cmd_stalks, "verify": cmd_verify, "scheme": cmd_scheme,
            "morphism": cmd_morphism}


class _Context:
    """Lazily built shared objects for one run."""

    def __init__(self, inst, needs_n):
        self.inst = inst
        self.M = inst.module("M")
        self.N = inst.module("N") if needs_n else inst.module("N", required=False)
        self.notices = []
        self._topology = None
        self._sheaf = None

    def topology(self):
        if self._topology is None:
            self._topology = dual_zariski(self.M, guards=self.inst.guards)
        return self._topology

    def sheaf(self):
        if self._sheaf is None:
            self._sheaf = StructureSheaf(self.topology(), self.N, guards=self.inst.guards)
        return self._sheaf


def run(command, doc, env=None, flags=None, timings=False):
    """Run ``command`` on a parsed document; returns ``(report, exit_status)``.

    Document and precondition errors propagate; guard trips and internal
    disagreements are reported with status 3 and 1.
    """
    inst = load_instance(doc, env=env, flags=flags)
    ctx = _Context(inst, needs_n=command in ("sections", "stalks", "verify"))
    report = {"command": command, "instance": doc}
    start = time.perf_counter()
    try:
        result, records = HANDLERS[command](inst, ctx)
    except CapacityError as exc:
        report.update(status="guard-trip", guard={"what": exc.what, "size": exc.size,
                                                  "bound": exc.bound})
        return report, 3
    except TheoremViolation as exc:
        report.update(status="theorem-violation", message=str(exc))
        return report, 1
    counts = summarize(records)
    report.update(result=result, records=[r.to_dict() for r in records], summary=counts,
                  guard_notices=ctx.notices,
                  status="fail" if counts["fail"] else "ok")
    if timings:
        report["timings"] = {"seconds": round(time.perf_counter() - start, 6)}
    return report, 1 if counts["fail"] else 0


def dump(report):
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def _write(path, text):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def build_parser():
    p = argparse.ArgumentParser(prog="secondsheaf",
                                description="Second spectrum, dual Zariski topology and structure sheaf "
                                            "of finite modules.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--input", help="instance document (JSON); '-' for stdin")
    p.add_argument("--out", help="report file (default: stdout)")
    p.add_argument("--dot", help="also write the topology as DOT to this file")
    p.add_argument("--seed", type=int, default=0, help="seed for 'generate'")
    p.add_argument("--max-ring", type=int, default=36, help="largest ring order for 'generate'")
    p.add_argument("--max-module", type=int, default=64, help="largest module order for 'generate'")
    p.add_argument("--guard-families", type=int, help="cap on brute-force candidate families")
    p.add_argument("--guard-constructive", type=int, help="cap on glued partial families")
    p.add_argument("--guard-hom", type=int, help="cap on homomorphism search size")
    p.add_argument("--timings", action="store_true", help="include wall-clock timings in the report")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "generate":
        doc = random_instance(args.seed, max_ring=args.max_ring, max_module=args.max_module)
        _write(args.out, json.dumps(doc, indent=2, sort_keys=True) + "\n")
        return 0
    if not args.input:
        print("error: --input is required", file=sys.stderr)
        return 2
    flags = {"families": args.guard_families, "constructive": args.guard_constructive,
             "hom": args.guard_hom}
    try:
        if args.input == "-":
            text = sys.stdin.read()
        else:
            with open(args.input, encoding="utf-8") as fh:
                text = fh.read()
        doc = parse_document(text)
        if args.command == "export-dot":
            inst = load_instance(doc, env=os.environ, flags=flags)
            _write(args.dot or args.out, dual_zariski(inst.module("M"), guards=inst.guards).to_dot())
            return 0
        report, status = run(args.command, doc, env=os.environ, flags=flags, timings=args.timings)
        if args.dot:
            inst = load_instance(doc, env=os.environ, flags=flags)
            _write(args.dot, dual_zariski(inst.module("M"), guards=inst.guards).to_dot())
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (DocumentError, StructuralError, PreconditionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CapacityError as exc:
        print(f"guard: {exc}", file=sys.stderr)
        return 3
    _write(args.out, dump(report))
    return status


if __name__ == "__main__":
    sys.exit(main())
