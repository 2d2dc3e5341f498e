"""Formation template registry.

Templates live in a small CSV document (``formation_name,slot_label,x,y``)
preceded by ``#`` comment lines. A ``# labels:`` comment line declares the
label taxonomy; every slot label must come from it. Coordinates are in a
shared frame with x increasing toward the attacking goal.
"""

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
import csv
import io
from pathlib import Path

import numpy as np

OUTFIELD_COUNTS = (8, 9, 10)
HEADER = ("formation_name", "slot_label", "x", "y")
# extent of the bundled template frame: (length along x, width along y)
TEMPLATE_FRAME = (105.0, 68.0)


class TemplateError(ValueError):
    """Raised when a template document violates the registry invariants."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


@dataclass(frozen=True)
class FormationTemplate:
    name: str
    labels: tuple
    positions: np.ndarray  # (n, 2), row order matches labels

    def __post_init__(self):
        self.positions.setflags(write=False)

    @property
    def outfielder_count(self):
        return len(self.labels)

    @property
    def slots(self):
        return [(lab, (float(x), float(y))) for lab, (x, y) in zip(self.labels, self.positions)]


@dataclass(frozen=True)
class TemplateBounds:
    min_x: float
    max_x: float
    min_y: float
    max_y: float

    @property
    def width(self):
        """Extent across the pitch (y)."""
        return self.max_y - self.min_y

    @property
    def length(self):
        """Extent along the direction of play (x)."""
        return self.max_x - self.min_x


class Registry(tuple):
    """Immutable, ordered collection of templates with name lookup."""

    def __new__(cls, templates, taxonomy=None, header=()):
        self = super().__new__(cls, templates)
        self.taxonomy = tuple(taxonomy) if taxonomy is not None else None
        self.header = tuple(header)
        self._by_name = {t.name: t for t in self}
        self._bounds = None
        return self

    @property
    def names(self):
        return [t.name for t in self]

    def __getitem__(self, key):
        if isinstance(key, str):
            return self._by_name[key]
        return super().__getitem__(key)

    def __contains__(self, item):
        if isinstance(item, str):
            return item in self._by_name
        return super().__contains__(item)

    def bounds(self):
        if self._bounds is None:
            self._bounds = bounds(self)
        return self._bounds


def _read_document(source):
    """Split a template document into comment lines and data rows (with line numbers)."""
    if isinstance(source, Path) or (isinstance(source, str) and "\n" not in source):
        text = Path(source).read_text(encoding="utf-8")
    elif hasattr(source, "read"):
        text = source.read()
    else:
        text = source
    comments, body = [], []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if line.startswith("#"):
            comments.append(line)
        elif line.strip():
            body.append((lineno, line))
    return comments, body


def check_document(source):
    """Parse a template document, collecting every violation instead of raising.

    Returns ``(records, taxonomy, comments, violations)`` where records is a list
    of ``(name, [(label, x, y), ...])`` in document order.
    """
    comments, body = _read_document(source)
    violations = []
    taxonomy = None
    for line in comments:
        key, _, value = line.lstrip("#").partition(":")
        if key.strip() == "labels":
            taxonomy = [v.strip() for v in value.split(",") if v.strip()]

    records = {}
    if not body:
        return [], taxonomy, comments, ["document contains no templates"]
    rows = list(csv.reader(line for _, line in body))
    if tuple(c.strip() for c in rows[0]) != HEADER:
        violations.append(f"line {body[0][0]}: expected header {','.join(HEADER)}")
        return [], taxonomy, comments, violations
    for (lineno, _), row in zip(body[1:], rows[1:]):
        if len(row) != 4:
            violations.append(f"line {lineno}: expected 4 fields, got {len(row)}")
            continue
        name, label = row[0].strip(), row[1].strip()
        try:
            x, y = float(row[2]), float(row[3])
        except ValueError:
            violations.append(f"line {lineno}: non-numeric coordinate")
            continue
        if not (np.isfinite(x) and np.isfinite(y)):
            violations.append(f"line {lineno}: non-finite coordinate")
            continue
        if taxonomy is not None and label not in taxonomy:
            violations.append(f"line {lineno}: label {label!r} not in taxonomy")
        records.setdefault(name, []).append((label, x, y))

    for name, slots in records.items():
        n = len(slots)
        if n not in OUTFIELD_COUNTS:
            violations.append(f"template {name}: {n} slots, expected 8, 9 or 10")
        labels = [s[0] for s in slots]
        dupes = sorted({lab for lab in labels if labels.count(lab) > 1})
        for lab in dupes:
            violations.append(f"template {name}: duplicate label {lab}")

    # a name split over non-adjacent blocks is a duplicate template definition
    seen, last = set(), None
    for (lineno, _), row in zip(body[1:], rows[1:]):
        name = row[0].strip() if row else ""
        if name != last:
            if name in seen:
                violations.append(f"line {lineno}: duplicate template name {name}")
            seen.add(name)
            last = name
    return list(records.items()), taxonomy, comments, violations


def load_registry(source=None):
    """Load templates from a path, file object or document text.

    ``None`` loads the bundled 65-template set.
    """
    if source is None:
        return default_registry()
    records, taxonomy, comments, violations = check_document(source)
    if violations:
        raise TemplateError(violations)
    templates = [
        FormationTemplate(
            name=name,
            labels=tuple(s[0] for s in slots),
            positions=np.array([[s[1], s[2]] for s in slots], dtype=float),
        )
        for name, slots in records
    ]
    return Registry(templates, taxonomy=taxonomy, header=comments)


@lru_cache(maxsize=1)
def default_registry():
    text = resources.files("formations").joinpath("data/templates.csv").read_text(encoding="utf-8")
    return load_registry(text)


def dump_registry(registry):
    """Serialize a registry back to the document format (lossless round trip)."""
    out = io.StringIO()
    for line in registry.header:
        out.write(line + "\n")
    if registry.taxonomy is not None and not any(
        line.lstrip("#").strip().startswith("labels:") for line in registry.header
    ):
        out.write("# labels: " + ",".join(registry.taxonomy) + "\n")
    w = csv.writer(out, lineterminator="\n")
    w.writerow(HEADER)
    for t in registry:
        for label, (x, y) in zip(t.labels, t.positions):
            w.writerow([t.name, label, repr(float(x)), repr(float(y))])
    return out.getvalue()


def filter_by_count(registry, n):
    return [t for t in registry if t.outfielder_count == n]


def bounds(registry) -> TemplateBounds:
    """Tight bounding box over every slot of every template."""
    templates = [registry] if isinstance(registry, FormationTemplate) else list(registry)
    if not templates:
        raise ValueError("cannot compute bounds of an empty registry")
    pts = np.concatenate([t.positions for t in templates])
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    return TemplateBounds(float(lo[0]), float(hi[0]), float(lo[1]), float(hi[1]))
