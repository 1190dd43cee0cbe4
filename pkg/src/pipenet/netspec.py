"""Parser and elaborator for the `.pipenet` network description format.

The format is line oriented. `#` starts a comment, blank lines are
ignored, and each statement is one line:

    gas Rs=<f> z0=<f> T0=<f> [cv=<f>] [Tamb=<f>]
    pipe <id> L=<f> d=<f> [dout=<f>] [eps=<f>] [dh=<f>] [lambda=<f>] [Re=<f>] [krad=<f>]
    gain <id> k=<f>
    joint <id> feeds=[<idA>,<idB>] into=<idC>
    branch <id> from=<idA> into=[<idB>,<idC>]
    series <id> pipes=[<id1>,...]
    nominal <id|*> pl=<f> q=<f> [Tl=<f>] [Tr=<f>]
    link <elem>.<port> <elem>.<port>
    input <name> = <elem>.<port>
    output <name> = <signal-label>

Links name a right-flange port first and a left-flange port second.
Pipes consumed by a joint, branch or series are parameter donors only;
they are not elements and may not be linked directly. Element
declaration order determines state ordering, so identical files yield
identical matrices.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace

from .composites import CompositeModel, make_branch, make_gain, make_joint, make_pipe, make_series
from .core import GasProperties, PipeParams
from .errors import ConfigurationError, ParseError
from .friction import resolve_lambda
from .interconnect import ConnectionMatrices, StackedSystem, build_FG, close, stack
from .steady_state import isothermal_nominal

_DEFAULT_CV = 1700.0

_ID_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")

_LEFT_PORTS = {"l", "l1", "l2"}
_RIGHT_PORTS = {"r", "r1", "r2"}


@dataclass(frozen=True)
class PipeDecl:
    name: str
    L: float
    d: float
    dout: float | None = None
    eps: float = 0.0
    dh: float = 0.0
    lam: float | None = None
    Re: float | None = None
    krad: float = 0.0


@dataclass(frozen=True)
class GainDecl:
    name: str
    k: float


@dataclass(frozen=True)
class JointDecl:
    name: str
    feeds: tuple[str, str]
    into: str


@dataclass(frozen=True)
class BranchDecl:
    name: str
    from_: str
    into: tuple[str, str]


@dataclass(frozen=True)
class SeriesDecl:
    name: str
    pipes: tuple[str, ...]


@dataclass(frozen=True)
class NominalDecl:
    target: str  # element id or '*'
    pl: float
    q: float
    Tl: float | None = None
    Tr: float | None = None


@dataclass(frozen=True)
class PortRef:
    element: str
    port: str

    def __str__(self):
        return f"{self.element}.{self.port}"


@dataclass(frozen=True)
class NetworkSpec:
    """Validated network description, ready for elaboration."""

    gas: GasProperties
    pipes: dict[str, PipeDecl]           # all pipe declarations, by name
    elements: tuple                      # stacked elements, declaration order
    nominals: dict[str, NominalDecl]     # per-id nominals; '*' is the default
    links: tuple[tuple[PortRef, PortRef], ...]
    inputs: tuple[tuple[str, PortRef], ...]
    outputs: tuple[tuple[str, str], ...]


def _fmt(x: float) -> str:
    return repr(float(x))


def _parse_float(tok: str, line: int, key: str) -> float:
    try:
        return float(tok)
    except ValueError:
        raise ParseError(f"bad numeric value for {key}: {tok!r}", line) from None


def _parse_kv(tokens, line, allowed, required):
    """Parse key=value tokens into a dict, enforcing the allowed key set."""
    out = {}
    for tok in tokens:
        if "=" not in tok:
            raise ParseError(f"expected key=value, got {tok!r}", line)
        key, _, val = tok.partition("=")
        if key not in allowed:
            raise ParseError(f"unknown key {key!r}", line)
        if key in out:
            raise ParseError(f"duplicate key {key!r}", line)
        out[key] = (val, line)
    for key in required:
        if key not in out:
            raise ParseError(f"missing required key {key!r}", line)
    return out


def _kv_float(kv, key, default=None):
    if key not in kv:
        return default
    val, line = kv[key]
    return _parse_float(val, line, key)


def _parse_id(tok: str, line: int) -> str:
    if not _ID_RE.match(tok):
        raise ParseError(f"invalid identifier {tok!r}", line)
    return tok


def _parse_id_list(val: str, line: int, key: str) -> tuple[str, ...]:
    if not (val.startswith("[") and val.endswith("]")):
        raise ParseError(f"{key} expects a bracketed list, got {val!r}", line)
    inner = val[1:-1]
    if not inner:
        raise ParseError(f"{key} list is empty", line)
    return tuple(_parse_id(part, line) for part in inner.split(","))


def _parse_portref(tok: str, line: int) -> PortRef:
    parts = tok.split(".")
    if len(parts) != 2:
        raise ParseError(f"expected <elem>.<port>, got {tok!r}", line)
    elem = _parse_id(parts[0], line)
    port = parts[1]
    if port not in _LEFT_PORTS | _RIGHT_PORTS:
        raise ParseError(f"unknown port name {port!r}", line)
    return PortRef(elem, port)


def parse(text: str) -> NetworkSpec:
    """Parse a `.pipenet` document into a validated NetworkSpec."""
    gas_kv = None
    pipes: dict[str, PipeDecl] = {}
    elements = []
    element_names: dict[str, object] = {}
    nominals: dict[str, NominalDecl] = {}
    links = []
    inputs = []
    outputs = []
    consumed: dict[str, str] = {}  # pipe id -> consuming composite

    def declare(decl, line):
        if decl.name in element_names or decl.name in pipes:
            raise ParseError(f"duplicate element {decl.name!r}", line)
        element_names[decl.name] = decl
        elements.append(decl)

    def consume(pid, owner, line):
        decl = pipes.get(pid)
        if decl is None:
            raise ParseError(f"unknown pipe {pid!r}", line)
        if pid in consumed:
            raise ParseError(
                f"pipe {pid!r} already used by {consumed[pid]!r}", line)
        consumed[pid] = owner
        return decl

    for lineno, raw in enumerate(text.splitlines(), start=1):
        stmt = raw.split("#", 1)[0].strip()
        if not stmt:
            continue
        tokens = stmt.split()
        kind, args = tokens[0], tokens[1:]

        if kind == "gas":
            if gas_kv is not None:
                raise ParseError("duplicate gas block", lineno)
            gas_kv = _parse_kv(args, lineno, {"Rs", "z0", "T0", "cv", "Tamb"},
                               {"Rs", "z0", "T0"})
        elif kind == "pipe":
            if not args:
                raise ParseError("pipe needs a name", lineno)
            name = _parse_id(args[0], lineno)
            kv = _parse_kv(args[1:], lineno,
                           {"L", "d", "dout", "eps", "dh", "lambda", "Re", "krad"},
                           {"L", "d"})
            decl = PipeDecl(name, _kv_float(kv, "L"), _kv_float(kv, "d"),
                            dout=_kv_float(kv, "dout"),
                            eps=_kv_float(kv, "eps", 0.0),
                            dh=_kv_float(kv, "dh", 0.0),
                            lam=_kv_float(kv, "lambda"),
                            Re=_kv_float(kv, "Re"),
                            krad=_kv_float(kv, "krad", 0.0))
            declare(decl, lineno)
            pipes[name] = decl
        elif kind == "gain":
            if not args:
                raise ParseError("gain needs a name", lineno)
            name = _parse_id(args[0], lineno)
            kv = _parse_kv(args[1:], lineno, {"k"}, {"k"})
            decl = GainDecl(name, _kv_float(kv, "k"))
            declare(decl, lineno)
        elif kind == "joint":
            if not args:
                raise ParseError("joint needs a name", lineno)
            name = _parse_id(args[0], lineno)
            kv = _parse_kv(args[1:], lineno, {"feeds", "into"}, {"feeds", "into"})
            feeds = _parse_id_list(kv["feeds"][0], lineno, "feeds")
            if len(feeds) != 2:
                raise ParseError("joint feeds exactly two pipes", lineno)
            into = _parse_id(kv["into"][0], lineno)
            decl = JointDecl(name, feeds, into)
            declare(decl, lineno)
            for pid in (*feeds, into):
                consume(pid, name, lineno)
        elif kind == "branch":
            if not args:
                raise ParseError("branch needs a name", lineno)
            name = _parse_id(args[0], lineno)
            kv = _parse_kv(args[1:], lineno, {"from", "into"}, {"from", "into"})
            from_ = _parse_id(kv["from"][0], lineno)
            into = _parse_id_list(kv["into"][0], lineno, "into")
            if len(into) != 2:
                raise ParseError("branch splits into exactly two pipes", lineno)
            decl = BranchDecl(name, from_, into)
            declare(decl, lineno)
            for pid in (from_, *into):
                consume(pid, name, lineno)
        elif kind == "series":
            if not args:
                raise ParseError("series needs a name", lineno)
            name = _parse_id(args[0], lineno)
            kv = _parse_kv(args[1:], lineno, {"pipes"}, {"pipes"})
            members = _parse_id_list(kv["pipes"][0], lineno, "pipes")
            decl = SeriesDecl(name, members)
            declare(decl, lineno)
            for pid in members:
                consume(pid, name, lineno)
        elif kind == "nominal":
            if not args:
                raise ParseError("nominal needs a target", lineno)
            target = args[0]
            if target != "*":
                target = _parse_id(target, lineno)
            kv = _parse_kv(args[1:], lineno, {"pl", "q", "Tl", "Tr"}, {"pl", "q"})
            if target in nominals:
                raise ParseError(f"duplicate nominal for {target!r}", lineno)
            nominals[target] = NominalDecl(target, _kv_float(kv, "pl"),
                                           _kv_float(kv, "q"),
                                           Tl=_kv_float(kv, "Tl"),
                                           Tr=_kv_float(kv, "Tr"))
        elif kind == "link":
            if len(args) != 2:
                raise ParseError("link takes exactly two ports", lineno)
            a = _parse_portref(args[0], lineno)
            b = _parse_portref(args[1], lineno)
            if a.port not in _RIGHT_PORTS or b.port not in _LEFT_PORTS:
                raise ParseError(
                    "incompatible flanges: link is <right port> <left port>", lineno)
            links.append((a, b, lineno))
        elif kind in ("input", "output"):
            rest = stmt[len(kind):].strip()
            name, eq, value = rest.partition("=")
            name, value = name.strip(), value.strip()
            if not eq or not name or not value:
                raise ParseError(f"{kind} statement needs <name> = <target>", lineno)
            name = _parse_id(name, lineno)
            if kind == "input":
                inputs.append((name, _parse_portref(value, lineno), lineno))
            else:
                outputs.append((name, value, lineno))
        else:
            raise ParseError(f"unknown statement {kind!r}", lineno, column=1)

    if gas_kv is None:
        raise ParseError("no gas block")
    gkv = {k: _kv_float(gas_kv, k) for k in gas_kv}
    T0 = gkv["T0"]
    gas = GasProperties(R_s=gkv["Rs"], z_0=gkv["z0"],
                        c_v=gkv.get("cv", _DEFAULT_CV), T_0=T0,
                        T_amb=gkv.get("Tamb", T0))

    def check_portref(ref: PortRef, lineno: int):
        decl = element_names.get(ref.element)
        if decl is None:
            raise ParseError(f"unknown element {ref.element!r}", lineno)
        if isinstance(decl, PipeDecl) and ref.element in consumed:
            raise ParseError(
                f"pipe {ref.element!r} belongs to {consumed[ref.element]!r} "
                f"and may not be referenced directly", lineno)
        valid = _element_ports(decl)
        if ref.port not in valid:
            raise ParseError(
                f"element {ref.element!r} has no port {ref.port!r}", lineno)

    for a, b, lineno in links:
        check_portref(a, lineno)
        check_portref(b, lineno)
    seen_inputs = set()
    for name, ref, lineno in inputs:
        if name in seen_inputs:
            raise ParseError(f"duplicate input {name!r}", lineno)
        seen_inputs.add(name)
        check_portref(ref, lineno)
    for nom_target in nominals:
        if nom_target != "*" and nom_target not in pipes:
            raise ParseError(f"nominal names unknown pipe {nom_target!r}")

    # pipes consumed by a composite are parameter donors, not elements
    elements = [el for el in elements
                if not (isinstance(el, PipeDecl) and el.name in consumed)]

    return NetworkSpec(gas=gas, pipes=pipes, elements=tuple(elements),
                       nominals=nominals,
                       links=tuple((a, b) for a, b, _ in links),
                       inputs=tuple((n, r) for n, r, _ in inputs),
                       outputs=tuple((n, v) for n, v, _ in outputs))


def _element_ports(decl) -> tuple[str, ...]:
    if isinstance(decl, JointDecl):
        return ("l1", "l2", "r")
    if isinstance(decl, BranchDecl):
        return ("l", "r1", "r2")
    return ("l", "r")


def render(spec: NetworkSpec) -> str:
    """Canonical text form; parse(render(parse(t))) == parse(t)."""
    g = spec.gas
    lines = [f"gas Rs={_fmt(g.R_s)} z0={_fmt(g.z_0)} T0={_fmt(g.T_0)} "
             f"cv={_fmt(g.c_v)} Tamb={_fmt(g.T_amb)}"]
    emitted = set()

    def emit_pipe(p: PipeDecl):
        parts = [f"pipe {p.name} L={_fmt(p.L)} d={_fmt(p.d)}"]
        if p.dout is not None:
            parts.append(f"dout={_fmt(p.dout)}")
        if p.eps:
            parts.append(f"eps={_fmt(p.eps)}")
        if p.dh:
            parts.append(f"dh={_fmt(p.dh)}")
        if p.lam is not None:
            parts.append(f"lambda={_fmt(p.lam)}")
        if p.Re is not None:
            parts.append(f"Re={_fmt(p.Re)}")
        if p.krad:
            parts.append(f"krad={_fmt(p.krad)}")
        lines.append(" ".join(parts))
        emitted.add(p.name)

    for el in spec.elements:
        if isinstance(el, GainDecl):
            lines.append(f"gain {el.name} k={_fmt(el.k)}")
        elif isinstance(el, JointDecl):
            for pid in (*el.feeds, el.into):
                if pid not in emitted:
                    emit_pipe(spec.pipes[pid])
            lines.append(f"joint {el.name} feeds=[{','.join(el.feeds)}] into={el.into}")
        elif isinstance(el, BranchDecl):
            for pid in (el.from_, *el.into):
                if pid not in emitted:
                    emit_pipe(spec.pipes[pid])
            lines.append(f"branch {el.name} from={el.from_} into=[{','.join(el.into)}]")
        elif isinstance(el, SeriesDecl):
            for pid in el.pipes:
                if pid not in emitted:
                    emit_pipe(spec.pipes[pid])
            lines.append(f"series {el.name} pipes=[{','.join(el.pipes)}]")
        elif isinstance(el, PipeDecl):
            emit_pipe(el)
    for p in spec.pipes.values():
        if p.name not in emitted:
            emit_pipe(p)
    if "*" in spec.nominals:
        lines.append(_render_nominal(spec.nominals["*"]))
    for target in sorted(t for t in spec.nominals if t != "*"):
        lines.append(_render_nominal(spec.nominals[target]))
    for a, b in spec.links:
        lines.append(f"link {a} {b}")
    for name, ref in spec.inputs:
        lines.append(f"input {name} = {ref}")
    for name, label in spec.outputs:
        lines.append(f"output {name} = {label}")
    return "\n".join(lines) + "\n"


def _render_nominal(n: NominalDecl) -> str:
    parts = [f"nominal {n.target} pl={_fmt(n.pl)} q={_fmt(n.q)}"]
    if n.Tl is not None:
        parts.append(f"Tl={_fmt(n.Tl)}")
    if n.Tr is not None:
        parts.append(f"Tr={_fmt(n.Tr)}")
    return " ".join(parts)


def _pipe_params(decl: PipeDecl) -> PipeParams:
    params = PipeParams(L=decl.L, d=decl.d, d_out=decl.dout, eps=decl.eps,
                        h=decl.dh, lam=decl.lam, k_rad=decl.krad)
    return resolve_lambda(params, decl.Re)


def _member(spec: NetworkSpec, pid: str, explicit_only_tracker: list):
    """(PipeParams, OperatingPoint) for one member pipe."""
    decl = spec.pipes[pid]
    nom = spec.nominals.get(pid)
    if nom is None:
        nom = spec.nominals.get("*")
        explicit_only_tracker.append(False)
    else:
        explicit_only_tracker.append(True)
    if nom is None:
        raise ConfigurationError(f"no nominal point for pipe {pid!r}")
    params = _pipe_params(decl)
    op = isothermal_nominal(nom.pl, nom.q, spec.gas.T_0, params, spec.gas)
    return params, op


def build_elements(spec: NetworkSpec) -> list[CompositeModel]:
    """Instantiate every element model in declaration order."""
    out = []
    for el in spec.elements:
        if isinstance(el, PipeDecl):
            params, op = _member(spec, el.name, [])
            out.append(make_pipe(params, op, spec.gas, el.name))
        elif isinstance(el, GainDecl):
            out.append(make_gain(el.k, el.name))
        elif isinstance(el, JointDecl):
            explicit = []
            p0 = _member(spec, el.into, explicit)
            p1 = _member(spec, el.feeds[0], explicit)
            p2 = _member(spec, el.feeds[1], explicit)
            out.append(make_joint(p0, p1, p2, spec.gas,
                                  member_ids=(el.into, *el.feeds),
                                  check_nominal=all(explicit)))
        elif isinstance(el, BranchDecl):
            explicit = []
            p0 = _member(spec, el.from_, explicit)
            p1 = _member(spec, el.into[0], explicit)
            p2 = _member(spec, el.into[1], explicit)
            out.append(make_branch(p0, p1, p2, spec.gas,
                                   member_ids=(el.from_, *el.into),
                                   check_nominal=all(explicit)))
        elif isinstance(el, SeriesDecl):
            explicit = []
            members = [_member(spec, pid, explicit) for pid in el.pipes]
            out.append(make_series(members, spec.gas, member_ids=el.pipes,
                                   check_nominal=all(explicit)))
    return out


def elaborate(spec: NetworkSpec):
    """Build the stacked open-loop system and its connection matrices."""
    composites = build_elements(spec)
    by_name = {el.name: comp
               for el, comp in zip(spec.elements, composites)}
    stacked = stack([c.model for c in composites])

    def port(ref: PortRef):
        comp = by_name.get(ref.element)
        if comp is None:
            raise ConfigurationError(f"unknown element {ref.element!r}")
        try:
            return comp.ports[ref.port]
        except KeyError:
            raise ConfigurationError(
                f"element {ref.element!r} has no port {ref.port!r}") from None

    link_ports = [(port(a), port(b)) for a, b in spec.links]
    external_ports = [(name, port(ref)) for name, ref in spec.inputs]
    conn = build_FG(stacked, link_ports, external_ports)
    return stacked, conn


def build_closed(spec: NetworkSpec):
    """Elaborate and close the network into one labeled LTI model."""
    stacked, conn = elaborate(spec)
    return close(stacked, conn, tuple(name for name, _ in spec.inputs))


def override_gain(spec: NetworkSpec, element_id: str, k: float) -> NetworkSpec:
    """Copy of spec with one gain element's k replaced."""
    new_elements = []
    found = False
    for el in spec.elements:
        if isinstance(el, GainDecl) and el.name == element_id:
            el = replace(el, k=k)
            found = True
        new_elements.append(el)
    if not found:
        raise ConfigurationError(f"no gain element named {element_id!r}")
    return replace(spec, elements=tuple(new_elements))


def load(path) -> NetworkSpec:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())
