"""JSON document format for scalings: parse, validate, serialize.

A document lists the atoms, a mapping from class names to the subsets in each
class (each subset a sorted list of atom names, every subset of the atoms in
exactly one class), and the order as a list of [lesser, greater] class-name
cover pairs; the strict order is the transitive closure.  Serialization is
byte-stable: normal form sorts subsets within a class, emits cover pairs
only, and keeps classes in class-index order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping

from .algebra import Algebra
from .scaling import Scaling, ScalingError, transitive_closure


class DocumentError(ValueError):
    """Malformed scaling document; the message names the offending field."""


@dataclass(frozen=True)
class ScalingDocument:
    atoms: tuple[str, ...]
    classes: tuple[tuple[str, tuple[tuple[str, ...], ...]], ...]
    order: tuple[tuple[str, str], ...]

    @property
    def class_names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.classes)

    def to_scaling(self) -> Scaling:
        algebra = Algebra(self.atoms)
        index = {name: i for i, (name, _) in enumerate(self.classes)}
        k = len(self.classes)
        class_of = [None] * algebra.size
        for i, (name, subsets) in enumerate(self.classes):
            for subset in subsets:
                mask = 0
                for lab in subset:
                    mask |= 1 << self.atoms.index(lab)
                if class_of[mask] is not None:
                    raise DocumentError(
                        f"classes: subset {list(subset)} appears more than once"
                    )
                class_of[mask] = i
        missing = [m for m in range(algebra.size) if class_of[m] is None]
        if missing:
            labs = [lab for j, lab in enumerate(self.atoms) if missing[0] >> j & 1]
            raise DocumentError(f"classes: subset {labs} not assigned to any class")
        rows = [0] * k
        for lo, hi in self.order:
            rows[index[lo]] |= 1 << index[hi]
        rows = transitive_closure(rows, k)
        for i in range(k):
            if rows[i] >> i & 1:
                raise DocumentError(
                    f"order: cycle through class {self.class_names[i]!r}"
                )
        try:
            return Scaling(algebra, class_of, rows, class_names=self.class_names)
        except ScalingError as exc:
            raise DocumentError(str(exc)) from exc


def _fail(path: str, message: str):
    raise DocumentError(f"{path}: {message}")


def _expect_str_list(value, path: str) -> list[str]:
    if not isinstance(value, list) or any(not isinstance(v, str) for v in value):
        _fail(path, "expected a list of strings")
    return value


def parse(text: str) -> ScalingDocument:
    """Parse and validate; raises DocumentError naming the bad line or field."""
    try:
        raw = json.loads(text, object_pairs_hook=lambda pairs: pairs)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    try:
        top = dict(raw)
    except (TypeError, ValueError):
        raise DocumentError("top level: expected an object") from None
    if len(top) != len(raw):
        raise DocumentError("top level: duplicate keys")
    for key in ("atoms", "classes", "order"):
        if key not in top:
            _fail(key, "missing required field")
    extra = set(top) - {"atoms", "classes", "order"}
    if extra:
        _fail(sorted(extra)[0], "unknown field")

    atoms = _expect_str_list(top["atoms"], "atoms")
    if not atoms:
        _fail("atoms", "at least one atom required")
    if len(set(atoms)) != len(atoms):
        _fail("atoms", "atom names must be unique")

    classes_raw = top["classes"]
    if not isinstance(classes_raw, list) or any(
        not (isinstance(e, tuple) and len(e) == 2 and isinstance(e[0], str))
        for e in classes_raw
    ):
        _fail("classes", "expected an object of class-name -> subset list")
    names = [name for name, _ in classes_raw]
    if len(set(names)) != len(names):
        dup = next(n for n in names if names.count(n) > 1)
        _fail("classes", f"duplicate class name {dup!r}")
    classes = []
    for name, subsets in classes_raw:
        path = f"classes.{name}"
        if not isinstance(subsets, list) or not subsets:
            _fail(path, "expected a nonempty list of subsets")
        cooked = []
        for i, subset in enumerate(subsets):
            labs = _expect_str_list(subset, f"{path}[{i}]")
            for lab in labs:
                if lab not in atoms:
                    _fail(f"{path}[{i}]", f"unknown atom {lab!r}")
            if len(set(labs)) != len(labs):
                _fail(f"{path}[{i}]", "repeated atom in subset")
            cooked.append(tuple(sorted(labs)))
        classes.append((name, tuple(cooked)))

    order_raw = top["order"]
    if not isinstance(order_raw, list):
        _fail("order", "expected a list of [lesser, greater] pairs")
    order = []
    known = set(names)
    for i, pair in enumerate(order_raw):
        labs = _expect_str_list(pair, f"order[{i}]")
        if len(labs) != 2:
            _fail(f"order[{i}]", "expected exactly two class names")
        for lab in labs:
            if lab not in known:
                _fail(f"order[{i}]", f"unknown class {lab!r}")
        if labs[0] == labs[1]:
            _fail(f"order[{i}]", "a class cannot precede itself")
        order.append((labs[0], labs[1]))

    doc = ScalingDocument(tuple(atoms), tuple(classes), tuple(order))
    doc.to_scaling()  # full semantic validation
    return doc


def _cover_pairs(scaling: Scaling) -> list[tuple[int, int]]:
    pairs = []
    for i in range(scaling.k):
        row = scaling.lt[i]
        for j in range(scaling.k):
            if row >> j & 1 and not any(
                row >> m & 1 and scaling.lt[m] >> j & 1 for m in range(scaling.k)
            ):
                pairs.append((i, j))
    return pairs


def from_scaling(scaling: Scaling, names=None) -> ScalingDocument:
    """Document in normal form: subsets sorted within classes, covers only."""
    algebra = scaling.algebra
    if names is None:
        names = scaling.class_names
    if names is None:
        names = tuple(f"c{i}" for i in range(scaling.k))
    if len(names) != scaling.k or len(set(names)) != scaling.k:
        raise DocumentError("need one unique name per class")
    fibers = [[] for _ in range(scaling.k)]
    for mask in range(algebra.size):
        labs = tuple(sorted(algebra.from_mask(mask).labels()))
        fibers[scaling.class_of[mask]].append(labs)
    classes = tuple(
        (names[i], tuple(sorted(fibers[i], key=lambda s: (len(s), s))))
        for i in range(scaling.k)
    )
    order = tuple(
        (names[i], names[j]) for i, j in sorted(_cover_pairs(scaling))
    )
    return ScalingDocument(tuple(algebra.atom_labels), classes, order)


def serialize(doc: ScalingDocument) -> str:
    payload = {
        "atoms": list(doc.atoms),
        "classes": {name: [list(s) for s in subsets] for name, subsets in doc.classes},
        "order": [list(pair) for pair in doc.order],
    }
    return json.dumps(payload, indent=2) + "\n"
