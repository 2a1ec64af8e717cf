"""JSON project configuration: parsing, validation, canonical form, resolution.

Rationals are written as strings (``"p/q"`` or a finite decimal) and field
elements as expressions in the generator names, so nothing passes through a
float.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .algebra import CyclicAlgebra
from .iterated import IteratedAlgebra, tensor_construct
from .numberfield import FieldAutomorphism, FieldError, FieldTower
from .stbc import ConstellationSpec, Layout, LayoutSlot


class ConfigError(ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


def _rational_string(v, path: str) -> str:
    if not isinstance(v, str):
        raise ConfigError(path, f"rationals must be strings, got {type(v).__name__}")
    try:
        Fraction(v.strip())
    except (ValueError, ZeroDivisionError):
        raise ConfigError(path, f"not a rational: {v!r}") from None
    return v.strip()


def _string(v, path: str) -> str:
    if not isinstance(v, str) or not v.strip():
        raise ConfigError(path, "expected a nonempty string")
    return v.strip()


def _obj(v, path: str) -> dict:
    if not isinstance(v, dict):
        raise ConfigError(path, "expected an object")
    return v


def _keys(d: dict, path: str, allowed: set[str], required: set[str] = frozenset()):
    extra = set(d) - allowed
    if extra:
        raise ConfigError(path, f"unknown fields {sorted(extra)}")
    missing = set(required) - set(d)
    if missing:
        raise ConfigError(path, f"missing fields {sorted(missing)}")


@dataclass(frozen=True)
class LevelSpec:
    gen: str
    minpoly: tuple[str, ...]
    root: tuple[str, str] | None = None

    @classmethod
    def parse(cls, v, path):
        v = _obj(v, path)
        _keys(v, path, {"gen", "minpoly", "root"}, {"gen", "minpoly"})
        mp = v["minpoly"]
        if not isinstance(mp, list):
            raise ConfigError(path + ".minpoly", "expected a list of coefficient strings")
        root = v.get("root")
        if root is not None:
            if not isinstance(root, list) or len(root) != 2:
                raise ConfigError(path + ".root", "expected [re, im] strings")
            root = tuple(_rational_string(x, f"{path}.root[{k}]") for k, x in enumerate(root))
        return cls(_string(v["gen"], path + ".gen"),
                   tuple(_string(c, f"{path}.minpoly[{k}]") for k, c in enumerate(mp)),
                   root)

    def to_dict(self):
        d = {"gen": self.gen, "minpoly": list(self.minpoly)}
        if self.root is not None:
            d["root"] = list(self.root)
        return d


@dataclass(frozen=True)
class AutSpec:
    tower: str
    images: tuple[tuple[str, str], ...]

    @classmethod
    def parse(cls, v, path):
        v = _obj(v, path)
        _keys(v, path, {"tower", "images"}, {"tower", "images"})
        imgs = _obj(v["images"], path + ".images")
        return cls(_string(v["tower"], path + ".tower"),
                   tuple(sorted((k, _string(x, f"{path}.images.{k}")) for k, x in imgs.items())))

    def to_dict(self):
        return {"tower": self.tower, "images": dict(self.images)}


@dataclass(frozen=True)
class AlgebraSpec:
    kind: str
    params: tuple[tuple[str, Any], ...]

    FIELDS = {
        "cyclic": ({"tower", "sigma", "c", "division"}, {"tower", "sigma", "c"}),
        "iterated": ({"D", "tau", "d"}, {"D", "tau", "d"}),
        "tensor": ({"D0", "tau", "d"}, {"D0", "tau", "d"}),
    }

    @classmethod
    def parse(cls, v, path):
        v = _obj(v, path)
        kind = v.get("kind")
        if kind not in cls.FIELDS:
            raise ConfigError(path + ".kind", f"expected one of {sorted(cls.FIELDS)}")
        allowed, required = cls.FIELDS[kind]
        rest = {k: x for k, x in v.items() if k != "kind"}
        _keys(rest, path, allowed, required)
        params = {}
        for k, x in rest.items():
            if k == "d" and isinstance(x, list):
                params[k] = tuple(_string(y, f"{path}.d[{i}]") for i, y in enumerate(x))
            elif k == "division":
                if x not in ("asserted", "none"):
                    raise ConfigError(path + ".division", 'expected "asserted" or "none"')
                params[k] = x
            else:
                params[k] = _string(x, f"{path}.{k}")
        return cls(kind, tuple(sorted(params.items())))

    def get(self, key, default=None):
        return dict(self.params).get(key, default)

    def to_dict(self):
        d = {"kind": self.kind}
        for k, x in self.params:
            d[k] = list(x) if isinstance(x, tuple) else x
        return d


@dataclass(frozen=True)
class CodeSpec:
    algebra: str
    values: tuple[str, ...]
    multipliers: tuple[str, ...] | None = None
    slots: tuple[tuple[int, int, str], ...] | None = None
    include_zero: bool = False
    differences: bool = False

    @classmethod
    def parse(cls, v, path):
        v = _obj(v, path)
        _keys(v, path, {"algebra", "values", "layout", "include_zero", "differences"},
              {"algebra", "values", "layout"})
        vals = v["values"]
        if not isinstance(vals, list) or not vals:
            raise ConfigError(path + ".values", "expected a nonempty list of element strings")
        lay = _obj(v["layout"], path + ".layout")
        _keys(lay, path + ".layout", {"multipliers", "slots"})
        if ("multipliers" in lay) == ("slots" in lay):
            raise ConfigError(path + ".layout", 'give exactly one of "multipliers" or "slots"')
        mult = slots = None
        if "multipliers" in lay:
            mult = tuple(_string(x, f"{path}.layout.multipliers[{i}]")
                         for i, x in enumerate(lay["multipliers"]))
        else:
            out = []
            for i, s in enumerate(lay["slots"]):
                p = f"{path}.layout.slots[{i}]"
                s = _obj(s, p)
                _keys(s, p, {"part", "coeff", "multiplier"}, {"part", "coeff"})
                if not isinstance(s["part"], int) or not isinstance(s["coeff"], int):
                    raise ConfigError(p, "part and coeff must be integers")
                out.append((s["part"], s["coeff"], _string(s.get("multiplier", "1"), p)))
            slots = tuple(out)
        for key in ("include_zero", "differences"):
            if key in v and not isinstance(v[key], bool):
                raise ConfigError(f"{path}.{key}", "expected true or false")
        return cls(_string(v["algebra"], path + ".algebra"),
                   tuple(_string(x, f"{path}.values[{i}]") for i, x in enumerate(vals)),
                   mult, slots, v.get("include_zero", False), v.get("differences", False))

    def to_dict(self):
        lay = ({"multipliers": list(self.multipliers)} if self.multipliers is not None else
               {"slots": [{"part": p, "coeff": c, "multiplier": m} for p, c, m in self.slots]})
        return {"algebra": self.algebra, "values": list(self.values), "layout": lay,
                "include_zero": self.include_zero, "differences": self.differences}


SKEW_OPS = {"divmod", "divmod-left", "petit-mul", "right-nucleus", "irred"}


@dataclass(frozen=True)
class SkewQuerySpec:
    op: str
    params: tuple[tuple[str, Any], ...]

    @classmethod
    def parse(cls, v, path):
        v = _obj(v, path)
        op = v.get("op")
        if op not in SKEW_OPS:
            raise ConfigError(path + ".op", f"expected one of {sorted(SKEW_OPS)}")
        rest = {k: x for k, x in v.items() if k != "op"}
        _keys(rest, path, {"domain", "sigma", "inverse", "g", "f", "h", "algebra",
                           "root_of_unity"})
        params = {}
        for k, x in rest.items():
            p = f"{path}.{k}"
            if k in ("inverse", "root_of_unity"):
                if not isinstance(x, bool):
                    raise ConfigError(p, "expected true or false")
                params[k] = x
            elif k in ("g", "f", "h"):
                if not isinstance(x, list):
                    raise ConfigError(p, "expected a list of coefficients")
                coeffs = []
                for i, c in enumerate(x):
                    if isinstance(c, list):
                        coeffs.append(tuple(_string(y, f"{p}[{i}]") for y in c))
                    else:
                        coeffs.append(_string(c, f"{p}[{i}]"))
                params[k] = tuple(coeffs)
            else:
                params[k] = _string(x, p)
        if op == "irred":
            if "algebra" not in params and not {"domain", "sigma", "f"} <= set(params):
                raise ConfigError(path, 'irred needs "algebra" or "domain", "sigma" and "f"')
        else:
            need = {"divmod": "gf", "divmod-left": "gf", "petit-mul": "ghf",
                    "right-nucleus": "gf"}[op]
            missing = [k for k in ("domain", "sigma") + tuple(need) if k not in params]
            if missing:
                raise ConfigError(path, f"missing fields {missing}")
        return cls(op, tuple(sorted(params.items())))

    def get(self, key, default=None):
        return dict(self.params).get(key, default)

    def to_dict(self):
        d = {"op": self.op}
        for k, x in self.params:
            if k in ("g", "f", "h"):
                d[k] = [list(c) if isinstance(c, tuple) else c for c in x]
            else:
                d[k] = x
        return d


@dataclass(frozen=True)
class Budgets:
    height: int = 1
    search_cap: int = 20_000
    enumeration_cap: int = 10 ** 7
    precision: int = 30
    precision_ceiling: int = 240

    @classmethod
    def parse(cls, v, path):
        v = _obj(v, path)
        names = set(cls.__dataclass_fields__)
        _keys(v, path, names)
        for k, x in v.items():
            if not isinstance(x, int) or isinstance(x, bool) or x < 0:
                raise ConfigError(f"{path}.{k}", "expected a nonnegative integer")
        return cls(**v)

    def to_dict(self):
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


@dataclass(frozen=True)
class ProjectConfig:
    towers: tuple[tuple[str, tuple[LevelSpec, ...]], ...]
    automorphisms: tuple[tuple[str, AutSpec], ...]
    algebras: tuple[tuple[str, AlgebraSpec], ...]
    codes: tuple[tuple[str, CodeSpec], ...] = ()
    skew: tuple[tuple[str, SkewQuerySpec], ...] = ()
    budgets: Budgets = field(default_factory=Budgets)

    SECTIONS = ("towers", "automorphisms", "algebras", "codes", "skew", "budgets")

    @classmethod
    def from_dict(cls, raw) -> ProjectConfig:
        raw = _obj(raw, "")
        _keys(raw, "config", set(cls.SECTIONS), {"towers"})

        def section(name, parse):
            body = _obj(raw.get(name, {}), name)
            return tuple(sorted((k, parse(v, f"{name}.{k}")) for k, v in body.items()))

        def levels(v, path):
            if not isinstance(v, list) or not v:
                raise ConfigError(path, "expected a nonempty list of levels")
            return tuple(LevelSpec.parse(x, f"{path}[{i}]") for i, x in enumerate(v))

        cfg = cls(section("towers", levels), section("automorphisms", AutSpec.parse),
                  section("algebras", AlgebraSpec.parse), section("codes", CodeSpec.parse),
                  section("skew", SkewQuerySpec.parse),
                  Budgets.parse(raw.get("budgets", {}), "budgets"))
        cfg.check_names()
        return cfg

    @classmethod
    def loads(cls, text: str) -> ProjectConfig:
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"line {exc.lineno}, column {exc.colno}", exc.msg) from None
        return cls.from_dict(raw)

    @classmethod
    def load(cls, path: str) -> ProjectConfig:
        with open(path) as fh:
            return cls.loads(fh.read())

    def to_dict(self) -> dict:
        return {
            "towers": {k: [lv.to_dict() for lv in v] for k, v in self.towers},
            "automorphisms": {k: v.to_dict() for k, v in self.automorphisms},
            "algebras": {k: v.to_dict() for k, v in self.algebras},
            "codes": {k: v.to_dict() for k, v in self.codes},
            "skew": {k: v.to_dict() for k, v in self.skew},
            "budgets": self.budgets.to_dict(),
        }

    def canonical_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    def hash(self) -> str:
        return hashlib.sha256(self.canonical_json().encode()).hexdigest()

    def check_names(self):
        towers = dict(self.towers)
        auts = dict(self.automorphisms)
        algs = dict(self.algebras)
        for name, a in self.automorphisms:
            if a.tower not in towers:
                raise ConfigError(f"automorphisms.{name}.tower", f"unknown tower {a.tower!r}")
        for name, spec in self.algebras:
            p = f"algebras.{name}"
            if spec.kind == "cyclic":
                if spec.get("tower") not in towers:
                    raise ConfigError(p + ".tower", f"unknown tower {spec.get('tower')!r}")
                if spec.get("sigma") not in auts:
                    raise ConfigError(p + ".sigma", f"unknown automorphism {spec.get('sigma')!r}")
            else:
                base = "D" if spec.kind == "iterated" else "D0"
                ref = spec.get(base)
                if ref not in algs or algs[ref].kind != "cyclic":
                    raise ConfigError(f"{p}.{base}", f"{ref!r} is not a cyclic algebra")
                if spec.get("tau") not in auts:
                    raise ConfigError(p + ".tau", f"unknown automorphism {spec.get('tau')!r}")
        for name, code in self.codes:
            if code.algebra not in algs or algs[code.algebra].kind == "cyclic":
                raise ConfigError(f"codes.{name}.algebra",
                                  f"{code.algebra!r} is not an iterated or tensor algebra")
        for name, q in self.skew:
            if q.get("algebra") is not None and q.get("algebra") not in algs:
                raise ConfigError(f"skew.{name}.algebra", f"unknown algebra {q.get('algebra')!r}")


class Project:
    """Lazily resolved objects of a configuration."""

    def __init__(self, cfg: ProjectConfig):
        self.cfg = cfg
        self._towers: dict[str, FieldTower] = {}
        self._auts: dict[str, FieldAutomorphism] = {}
        self._algs: dict[str, Any] = {}

    def tower(self, name: str) -> FieldTower:
        if name not in self._towers:
            levels = dict(self.cfg.towers).get(name)
            if levels is None:
                raise ConfigError("towers", f"unknown tower {name!r}")
            t = FieldTower.rationals()
            for k, lv in enumerate(levels):
                try:
                    t = t.extend(lv.gen, lv.minpoly, lv.root)
                except FieldError as exc:
                    raise ConfigError(f"towers.{name}[{k}]", str(exc)) from None
            self._towers[name] = t
        return self._towers[name]

    def automorphism(self, name: str) -> FieldAutomorphism:
        if "." in name:
            return self._derived_aut(name)
        if name not in self._auts:
            spec = dict(self.cfg.automorphisms).get(name)
            if spec is None:
                raise ConfigError("automorphisms", f"unknown automorphism {name!r}")
            t = self.tower(spec.tower)
            try:
                self._auts[name] = FieldAutomorphism(t, dict(spec.images), name=name)
            except FieldError as exc:
                raise ConfigError(f"automorphisms.{name}", str(exc)) from None
        return self._auts[name]

    def _derived_aut(self, name: str) -> FieldAutomorphism:
        alg, attr = name.split(".", 1)
        obj = self.algebra(alg)
        D = obj.D if isinstance(obj, IteratedAlgebra) else obj
        table = {"sigma": D.sigma}
        if isinstance(obj, IteratedAlgebra):
            table["tau"] = obj.tau
            table["tau^-1"] = obj.tau.inverse()
        if attr not in table:
            raise ConfigError("", f"cannot resolve automorphism {name!r}")
        return table[attr]

    def algebra(self, name: str):
        if name not in self._algs:
            spec = dict(self.cfg.algebras).get(name)
            if spec is None:
                raise ConfigError("algebras", f"unknown algebra {name!r}")
            path = f"algebras.{name}"
            try:
                self._algs[name] = self._build_algebra(name, spec)
            except ConfigError:
                raise
            except (ValueError, ArithmeticError) as exc:
                raise ConfigError(path, str(exc)) from None
        return self._algs[name]

    def _build_algebra(self, name, spec: AlgebraSpec):
        if spec.kind == "cyclic":
            K = self.tower(spec.get("tower"))
            sigma = self.automorphism(spec.get("sigma"))
            if sigma.tower != K:
                raise ConfigError(f"algebras.{name}.sigma", "acts on a different tower")
            return CyclicAlgebra(K, sigma, K(spec.get("c")),
                                 division_asserted=spec.get("division") == "asserted",
                                 name=name)
        tau = self.automorphism(spec.get("tau"))
        d = spec.get("d")
        if spec.kind == "iterated":
            D = self.algebra(spec.get("D"))
            if isinstance(d, tuple):
                d = [D.K(x) for x in d]
            else:
                d = D.K(d)
            return IteratedAlgebra(D, tau, d, name=name)
        D0 = self.algebra(spec.get("D0"))
        if isinstance(d, tuple):
            raise ConfigError(f"algebras.{name}.d", "tensor products take d in F")
        return tensor_construct(D0, tau, tau.tower(d), name=name)

    def domain(self, name: str):
        """A tower, a cyclic algebra, or ``X.D`` / ``X.K`` of an iterated algebra."""
        if "." in name:
            alg, attr = name.split(".", 1)
            obj = self.algebra(alg)
            if attr == "D" and isinstance(obj, IteratedAlgebra):
                return obj.D
            if attr == "K":
                return obj.K
            raise ConfigError("", f"cannot resolve domain {name!r}")
        if name in dict(self.cfg.towers):
            return self.tower(name)
        obj = self.algebra(name)
        if not isinstance(obj, CyclicAlgebra):
            raise ConfigError("", f"{name!r} is not a coefficient domain")
        return obj

    def code(self, name: str):
        spec = dict(self.cfg.codes).get(name)
        if spec is None:
            raise ConfigError("codes", f"unknown code {name!r}")
        A = self.algebra(spec.algebra)
        if not isinstance(A, IteratedAlgebra):
            raise ConfigError(f"codes.{name}.algebra", "not an iterated algebra")
        K = A.K
        try:
            values = tuple(K(v) for v in spec.values)
            if spec.multipliers is not None:
                layout = Layout.standard(A, [K(x) for x in spec.multipliers])
            else:
                for p, c, _ in spec.slots:
                    if not (0 <= p < A.m and 0 <= c < A.n):
                        raise ConfigError(f"codes.{name}.layout", f"slot ({p}, {c}) out of range")
                layout = Layout(tuple(LayoutSlot(p, c, K(x)) for p, c, x in spec.slots))
            cons = ConstellationSpec(values, len(layout), spec.include_zero, spec.differences)
        except ConfigError:
            raise
        except (ValueError, ArithmeticError) as exc:
            raise ConfigError(f"codes.{name}", str(exc)) from None
        return A, cons, layout
