"""Instance documents: JSON descriptions of a ring, named modules and maps.

Errors carry a JSON path (``$.modules.N.kind``) or, for syntax errors, a
line and column.  The format is described in ``docs/instance-format.md``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import SecondSheafError, StructuralError
from .guards import Guards
from .modules import FiniteModule, ModuleMap, Submodule, direct_sum
from .rings import FiniteRing, RingMap

GUARD_NAMES = ("ring_order", "module_order", "families", "constructive", "hom")


class DocumentError(SecondSheafError, ValueError):
    def __init__(self, path, message):
        self.path = path
        super().__init__(f"{path}: {message}")


def _expect(cond, path, message):
    if not cond:
        raise DocumentError(path, message)


def _int(value, path, minimum=None):
    _expect(isinstance(value, int) and not isinstance(value, bool), path, "expected an integer")
    if minimum is not None:
        _expect(value >= minimum, path, f"expected an integer >= {minimum}")
    return value


def _int_list(value, path):
    _expect(isinstance(value, list), path, "expected a list of integers")
    return [_int(v, f"{path}[{i}]") for i, v in enumerate(value)]


def _table(value, rows, cols, path):
    _expect(isinstance(value, list) and len(value) == rows, path, f"expected {rows} rows")
    out = []
    for i, row in enumerate(value):
        row = _int_list(row, f"{path}[{i}]")
        _expect(len(row) == cols, f"{path}[{i}]", f"expected {cols} entries")
        _expect(all(0 <= x < cols for x in row), f"{path}[{i}]", "entry out of range")
        out.append(row)
    return out


def _kind(desc, path):
    _expect(isinstance(desc, dict), path, "expected an object")
    _expect("kind" in desc, path, "missing 'kind'")
    return desc["kind"]


def build_ring(desc, guards: Guards, path="$.ring") -> FiniteRing:
    kind = _kind(desc, path)
    try:
        if kind == "zmod":
            n = _int(desc.get("n"), f"{path}.n", minimum=1)
            guards.check("ring_order", n, "ring order")
            return FiniteRing.zmod(n)
        if kind == "product":
            fac = desc.get("factors")
            _expect(isinstance(fac, list) and fac, f"{path}.factors", "expected a non-empty list")
            rings = [build_ring(f, guards, f"{path}.factors[{i}]") for i, f in enumerate(fac)]
            size = 1
            for r in rings:
                size *= r.order
            guards.check("ring_order", size, "ring order")
            return FiniteRing.product(*rings)
        if kind == "table":
            k = _int(desc.get("order"), f"{path}.order", minimum=1)
            guards.check("ring_order", k, "ring order")
            add = _table(desc.get("add"), k, k, f"{path}.add")
            mul = _table(desc.get("mul"), k, k, f"{path}.mul")
            one = _int(desc.get("one", 1 if k > 1 else 0), f"{path}.one")
            zero = _int(desc.get("zero", 0), f"{path}.zero")
            return FiniteRing(add, mul, zero=zero, one=one, labels=desc.get("labels"),
                              name=desc.get("name"))
    except StructuralError as exc:
        raise DocumentError(path, str(exc)) from None
    raise DocumentError(f"{path}.kind", f"unknown ring kind {kind!r}")


@dataclass
class Instance:
    ring: FiniteRing
    modules: dict
    maps: dict
    guards: Guards
    morphism: dict | None = None
    raw: dict = field(default_factory=dict)
    _views: dict = field(default_factory=dict, repr=False)

    def module(self, name, required=True):
        obj = self.modules.get(name)
        if obj is None:
            if required:
                raise DocumentError(f"$.modules.{name}", "module is missing")
            return None
        if isinstance(obj, Submodule):
            if name not in self._views:
                self._views[name] = obj.as_module()
            return self._views[name]
        return obj

    def submodule_of_m(self, name):
        """``name`` as a submodule of ``M``; a module named by ``M`` itself is the whole."""
        obj = self.modules.get(name)
        if obj is None:
            raise DocumentError(f"$.modules.{name}", "module is missing")
        M = self.module("M")
        if isinstance(obj, Submodule) and obj.parent is M:
            return obj
        if obj is M:
            return M.whole
        raise DocumentError(f"$.modules.{name}", "expected a submodule of M")


class _Resolver:
    def __init__(self, ring, descs, guards):
        self.ring = ring
        self.descs = descs
        self.guards = guards
        self.done = {}
        self.active = set()

    def named(self, name, path):
        if name in self.done:
            return self.done[name]
        _expect(name in self.descs, path, f"unknown module {name!r}")
        _expect(name not in self.active, path, f"cyclic reference through {name!r}")
        self.active.add(name)
        obj = self.build(self.descs[name], f"$.modules.{name}")
        self.active.discard(name)
        self.done[name] = obj
        return obj

    def module(self, desc, path):
        obj = self.build(desc, path)
        return obj.as_module() if isinstance(obj, Submodule) else obj

    def build(self, desc, path):
        R = self.ring
        if isinstance(desc, str):
            return self.named(desc, path)
        kind = _kind(desc, path)
        try:
            if kind == "natural":
                M = FiniteModule.natural_module(R)
            elif kind == "zero":
                M = FiniteModule.zero_module(R)
            elif kind == "cyclic-product":
                orders = _int_list(desc.get("orders"), f"{path}.orders")
                size = 1
                for d in orders:
                    size *= max(d, 1)
                self.guards.check("module_order", size, "module order")
                M = FiniteModule.cyclic_product(R, orders)
            elif kind == "cyclic":
                gens = _int_list(desc.get("ideal", []), f"{path}.ideal")
                _expect(all(0 <= g < R.order for g in gens), f"{path}.ideal", "not a ring element")
                M = FiniteModule.cyclic(R, R.ideal(gens))
            elif kind == "direct-sum":
                parts = desc.get("summands")
                _expect(isinstance(parts, list) and parts, f"{path}.summands",
                        "expected a non-empty list")
                mods = [self.module(p, f"{path}.summands[{i}]") for i, p in enumerate(parts)]
                size = 1
                for m in mods:
                    size *= m.order
                self.guards.check("module_order", size, "module order")
                M = direct_sum(*mods) if len(mods) > 1 else mods[0]
            elif kind == "table":
                k = _int(desc.get("order"), f"{path}.order", minimum=1)
                self.guards.check("module_order", k, "module order")
                add = _table(desc.get("add"), k, k, f"{path}.add")
                act = _table(desc.get("act"), R.order, k, f"{path}.act")
                M = FiniteModule(R, add, act, zero=_int(desc.get("zero", 0), f"{path}.zero"),
                                 labels=desc.get("labels"), name=desc.get("name"))
            elif kind == "submodule":
                _expect("of" in desc, path, "missing 'of'")
                parent = self.build(desc["of"], f"{path}.of")
                if isinstance(parent, Submodule):
                    parent = parent.as_module()
                gens = _int_list(desc.get("generators", []), f"{path}.generators")
                _expect(all(0 <= g < parent.order for g in gens), f"{path}.generators",
                        "not an element of the parent module")
                return parent.submodule(gens)
            else:
                raise DocumentError(f"{path}.kind", f"unknown module kind {kind!r}")
        except StructuralError as exc:
            raise DocumentError(path, str(exc)) from None
        self.guards.check("module_order", M.order, "module order")
        return M


def build_module(desc, ring, guards=None, path="$"):
    """A single module description over ``ring`` (no named references)."""
    return _Resolver(ring, {}, guards or Guards()).module(desc, path)


def _build_map(desc, modules, path):
    _expect(isinstance(desc, dict), path, "expected an object")
    ends = []
    for end in ("source", "target"):
        name = desc.get(end)
        _expect(isinstance(name, str) and name in modules, f"{path}.{end}", "unknown module")
        obj = modules[name]
        ends.append(obj.as_module() if isinstance(obj, Submodule) else obj)
    A, B = ends
    vals = _int_list(desc.get("values"), f"{path}.values")
    _expect(len(vals) == A.order, f"{path}.values", f"expected {A.order} values")
    _expect(all(0 <= v < B.order for v in vals), f"{path}.values", "value out of range")
    try:
        return ModuleMap(A, B, vals)
    except StructuralError as exc:
        raise DocumentError(path, str(exc)) from None


def resolve_guards(doc_guards, env=None, flags=None) -> Guards:
    """Defaults, then the document, then the environment, then CLI flags."""
    g = Guards()
    if doc_guards:
        _expect(isinstance(doc_guards, dict), "$.guards", "expected an object")
        for k, v in doc_guards.items():
            _expect(k in GUARD_NAMES, f"$.guards.{k}", "unknown guard")
            g = g.with_overrides(**{k: _int(v, f"$.guards.{k}", minimum=0)})
    env_g = Guards.from_env(env)
    g = g.with_overrides(**{k: getattr(env_g, k) for k in GUARD_NAMES
                            if getattr(env_g, k) != getattr(Guards(), k)})
    return g.with_overrides(**(flags or {}))


def load_instance(doc, env=None, flags=None) -> Instance:
    """Validate a parsed document and build every object it names."""
    _expect(isinstance(doc, dict), "$", "expected an object")
    guards = resolve_guards(doc.get("guards"), env, flags)
    _expect("ring" in doc, "$", "missing 'ring'")
    R = build_ring(doc["ring"], guards)
    descs = doc.get("modules", {"M": {"kind": "natural"}})
    _expect(isinstance(descs, dict), "$.modules", "expected an object")
    res = _Resolver(R, descs, guards)
    modules = {name: res.named(name, f"$.modules.{name}") for name in descs}
    maps = {}
    raw_maps = doc.get("maps", {})
    _expect(isinstance(raw_maps, dict), "$.maps", "expected an object")
    for name, desc in raw_maps.items():
        maps[name] = _build_map(desc, modules, f"$.maps.{name}")
    morphism = doc.get("morphism")
    if morphism is not None:
        _expect(isinstance(morphism, dict), "$.morphism", "expected an object")
    return Instance(R, modules, maps, guards, morphism, doc)


def parse_document(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"line {exc.lineno} column {exc.colno}", exc.msg) from None


def _is_zmod(R):
    return isinstance(R.provenance, tuple) and R.provenance[0] == "zmod"


def ring_map_from(desc, source: FiniteRing, guards, path="$.morphism"):
    """A ring map described by its target ring and optional value table."""
    target = build_ring(desc.get("target_ring"), guards, f"{path}.target_ring")
    try:
        if "values" in desc:
            vals = _int_list(desc["values"], f"{path}.values")
            _expect(len(vals) == source.order, f"{path}.values", f"expected {source.order} values")
            _expect(all(0 <= v < target.order for v in vals), f"{path}.values", "value out of range")
            return RingMap(source, target, vals)
        _expect(_is_zmod(source) and _is_zmod(target),
                f"{path}.values", "values are required unless both rings are Z/n")
        return RingMap.reduction(source, target)
    except StructuralError as exc:
        raise DocumentError(path, str(exc)) from None
