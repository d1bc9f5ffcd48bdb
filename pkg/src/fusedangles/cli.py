"""Command-line front end.

Exit codes: 0 success, 2 parse error, 3 domain error (sine sum criterion,
non-unit quaternion, non-rotation matrix, fused yaw singularity).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import convert, fusedops
from .rotcore import DomainError, random_rotation, quat_conj, quat_mul, elementary_quat, wrap

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_DOMAIN = 3

ARITY = {"quat": 4, "rotmat": 9, "tilt": 3, "fused": 4, "euler": 3, "axisangle": 4}
# which positions hold angles (scaled by --deg)
ANGLE_SLOTS = {
    "quat": (),
    "rotmat": (),
    "tilt": (0, 1, 2),
    "fused": (0, 1, 2),
    "euler": (0, 1, 2),
    "axisangle": (3,),
}


class ParseError(Exception):
    pass


def fmt(x):
    return "%.17g" % (float(x) + 0.0)


@dataclass(frozen=True)
class RotationRecord:
    rep: str
    values: tuple
    units: str = "rad"

    @classmethod
    def parse(cls, text, rep, units="rad"):
        """Parse ``a,b,c`` (commas and/or spaces) or a JSON record object."""
        text = text.strip()
        if text.startswith("{"):
            try:
                obj = json.loads(text)
                rep = obj.get("repr", rep)
                units = obj.get("units", units)
                vals = [float(v) for v in obj["values"]]
            except (ValueError, KeyError, TypeError) as exc:
                raise ParseError(f"bad JSON record: {exc}") from None
        else:
            try:
                vals = [float(t) for t in text.replace(",", " ").split()]
            except ValueError as exc:
                raise ParseError(f"cannot parse values {text!r}: {exc}") from None
        if rep not in ARITY:
            raise ParseError(f"unknown representation {rep!r}")
        if units not in ("rad", "deg"):
            raise ParseError(f"unknown units {units!r}")
        if len(vals) != ARITY[rep]:
            raise ParseError(f"{rep} takes {ARITY[rep]} values, got {len(vals)}")
        if not all(math.isfinite(v) for v in vals):
            raise ParseError("values must be finite")
        return cls(rep, tuple(vals), units)

    @classmethod
    def from_radians(cls, rep, arr, units="rad"):
        vals = [float(v) for v in np.ravel(arr)]
        if units == "deg":
            for i in ANGLE_SLOTS[rep]:
                vals[i] = math.degrees(vals[i])
        return cls(rep, tuple(vals), units)

    def radians(self):
        vals = list(self.values)
        if self.units == "deg":
            for i in ANGLE_SLOTS[self.rep]:
                vals[i] = math.radians(vals[i])
        arr = np.array(vals)
        return arr.reshape(3, 3) if self.rep == "rotmat" else arr

    def quat(self):
        return convert.to_quat(self.radians(), self.rep)

    def plain(self):
        return " ".join(fmt(v) for v in self.values)

    def to_json(self):
        return json.dumps({"repr": self.rep, "units": self.units, "values": [float(v) + 0.0 for v in self.values]})


def _emit_record(rec, as_json, out):
    out.write((rec.to_json() if as_json else rec.plain()) + "\n")


def _operands(args, count):
    """Yield operand lists: from repeated --value, else one stdin line per item."""
    units = "deg" if args.deg else "rad"
    if args.value:
        if len(args.value) != count:
            raise ParseError(f"expected {count} --value operand(s), got {len(args.value)}")
        yield [RotationRecord.parse(v, args.repr, units) for v in args.value]
        return
    for line in sys.stdin:
        if not line.strip():
            continue
        parts = line.split(";") if count > 1 else [line]
        if len(parts) != count:
            raise ParseError(f"expected {count} ';'-separated records per line")
        yield [RotationRecord.parse(p, args.repr, units) for p in parts]


# ---------------------------------------------------------------------------
# commands


def cmd_convert(args, out):
    args.repr = args.src
    for (rec,) in _operands(args, 1):
        res = convert.convert(rec.radians(), rec.rep, args.dst)
        _emit_record(RotationRecord.from_radians(args.dst, res, rec.units), args.json, out)


def cmd_inverse(args, out):
    for (rec,) in _operands(args, 1):
        res = fusedops.inverse(rec.radians(), rec.rep)
        _emit_record(RotationRecord.from_radians(rec.rep, res, rec.units), args.json, out)


def cmd_compose(args, out):
    for a, b in _operands(args, 2):
        res = fusedops.compose(a.radians(), b.radians(), args.repr)
        _emit_record(RotationRecord.from_radians(args.repr, res, a.units), args.json, out)


def cmd_remove_yaw(args, out):
    for (rec,) in _operands(args, 1):
        q = fusedops.remove_yaw(rec.quat())
        _emit_record(RotationRecord.from_radians(rec.rep, convert.from_quat(q, rec.rep), rec.units), args.json, out)


def cmd_metric(args, out):
    for a, b in _operands(args, 2):
        qa, qb = a.quat(), b.quat()
        if args.kind == "dR":
            val = float(fusedops.metric_dR(qa, qb))
            if args.deg:
                val = math.degrees(val)
        else:
            val = float(fusedops.metric_dL(qa, qb))
        if args.json:
            out.write(json.dumps({"metric": args.kind, "value": val}) + "\n")
        else:
            out.write(fmt(val) + "\n")


def cmd_slerp(args, out):
    if not 0.0 <= args.t <= 1.0:
        raise ParseError("--t must lie in [0, 1]")
    for a, b in _operands(args, 2):
        q = fusedops.slerp(a.quat(), b.quat(), args.t)
        _emit_record(RotationRecord.from_radians(args.repr, convert.from_quat(q, args.repr), a.units), args.json, out)


def loci_points(kind, value, samples):
    """Unit z-vectors (body frame) on the locus of a constant fused parameter.

    Pitch and roll loci are cones about the body x- and y-axes; the
    hemisphere locus is given by its boundary circle plus the pole.
    """
    if samples < 3:
        raise ParseError("--samples must be at least 3")
    if kind in ("pitch", "roll"):
        if abs(value) > math.pi / 2 + 1e-12:
            raise DomainError(f"fused {kind} must lie in [-pi/2, pi/2]")
        t = 2.0 * np.pi * np.arange(samples) / samples
        s, c = math.sin(value), math.cos(value)
        if kind == "pitch":
            pts = np.stack([np.full_like(t, -s), c * np.cos(t), c * np.sin(t)], axis=-1)
        else:
            pts = np.stack([c * np.cos(t), np.full_like(t, s), c * np.sin(t)], axis=-1)
        return pts
    h = int(value)
    if h not in (1, -1):
        raise DomainError("hemisphere must be 1 or -1")
    n = samples - 1
    t = 2.0 * np.pi * np.arange(n) / n
    rim = np.stack([np.cos(t), np.sin(t), np.zeros_like(t)], axis=-1)
    return np.vstack([rim, [[0.0, 0.0, float(h)]]])


def cmd_loci(args, out):
    if args.pitch is not None:
        kind, value = "pitch", args.pitch
    elif args.roll is not None:
        kind, value = "roll", args.roll
    else:
        kind, value = "hemi", args.hemi
    if kind != "hemi" and args.deg:
        value = math.radians(value)
    pts = loci_points(kind, value, args.samples)
    out.write("x,y,z\n")
    for p in pts:
        out.write(",".join(fmt(c) for c in p) + "\n")


def yaw_conjugation_deviation(q, betas):
    """Max yaw change, fused and ZYX Euler, under re-choosing the global x/y axes.

    Re-choosing the axes by an angle beta about z conjugates the rotation
    by Rz(beta).
    """
    fy = convert.quat_fused_yaw(q)
    ey = convert.quat_to_euler_zyx(q)[..., 0]
    dev_f = np.zeros(fy.shape)
    dev_e = np.zeros(ey.shape)
    for b in betas:
        qz = elementary_quat("z", b)
        qc = quat_mul(quat_mul(qz, q), quat_conj(qz))
        dev_f = np.maximum(dev_f, np.abs(wrap(convert.quat_fused_yaw(qc) - fy)))
        dev_e = np.maximum(dev_e, np.abs(wrap(convert.quat_to_euler_zyx(qc)[..., 0] - ey)))
    return dev_f, dev_e


def cmd_demo_yaw_compare(args, out):
    if args.n < 1:
        raise ParseError("-n must be at least 1")
    rng = np.random.default_rng(args.seed)
    q = random_rotation(rng, args.n)
    betas = 2.0 * np.pi * np.arange(1, args.betas + 1) / args.betas - np.pi
    dev_f, dev_e = yaw_conjugation_deviation(q, betas)
    fy = convert.quat_fused_yaw(q)
    ey = convert.quat_to_euler_zyx(q)[:, 0]
    out.write("sample,fused_yaw,euler_zyx_yaw,max_dev_fused,max_dev_euler\n")
    for i in range(args.n):
        out.write(",".join([str(i), fmt(fy[i]), fmt(ey[i]), fmt(dev_f[i]), fmt(dev_e[i])]) + "\n")
    out.write(f"# max |dpsi| fused: {fmt(dev_f.max())}\n")
    out.write(f"# max |dpsi| euler_zyx: {fmt(dev_e.max())}\n")


def cmd_random(args, out):
    if args.n < 1:
        raise ParseError("-n must be at least 1")
    rng = np.random.default_rng(args.seed)
    q = random_rotation(rng, args.n)
    res = convert.from_quat(q, args.repr)
    units = "deg" if args.deg else "rad"
    for r in res:
        _emit_record(RotationRecord.from_radians(args.repr, r, units), args.json, out)


# ---------------------------------------------------------------------------
# parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ParseError(message)


def build_parser():
    p = _Parser(prog="fusedangles", description="Fused angles and tilt angles rotation tool")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    reprs = list(ARITY)

    def common(sp, repr_default="quat", with_repr=True):
        if with_repr:
            sp.add_argument("--repr", choices=reprs, default=repr_default)
        sp.add_argument("--value", action="append", help="record, e.g. 1,0,0,0 (stdin if omitted)")
        sp.add_argument("--deg", action="store_true", help="angles in degrees (input and output)")
        sp.add_argument("--json", action="store_true", help="emit one JSON object per record")

    sp = sub.add_parser("convert", help="convert between representations")
    sp.add_argument("--from", dest="src", choices=reprs, required=True)
    sp.add_argument("--to", dest="dst", choices=reprs, required=True)
    common(sp, with_repr=False)
    sp.set_defaults(func=cmd_convert)

    sp = sub.add_parser("inverse", help="inverse rotation")
    common(sp, "fused")
    sp.set_defaults(func=cmd_inverse)

    sp = sub.add_parser("compose", help="compose two rotations (first after second)")
    common(sp)
    sp.set_defaults(func=cmd_compose)

    sp = sub.add_parser("remove-yaw", help="remove the fused yaw component")
    common(sp)
    sp.set_defaults(func=cmd_remove_yaw)

    sp = sub.add_parser("metric", help="distance between two rotations")
    sp.add_argument("--kind", choices=["dR", "dL"], default="dR")
    common(sp)
    sp.set_defaults(func=cmd_metric)

    sp = sub.add_parser("slerp", help="spherical linear interpolation")
    sp.add_argument("--t", type=float, required=True)
    common(sp)
    sp.set_defaults(func=cmd_slerp)

    sp = sub.add_parser("loci", help="CSV samples of constant-parameter loci of the z-vector")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--pitch", type=float)
    g.add_argument("--roll", type=float)
    g.add_argument("--hemi", type=int, choices=[1, -1])
    sp.add_argument("--samples", type=int, default=36)
    sp.add_argument("--deg", action="store_true")
    sp.set_defaults(func=cmd_loci)

    sp = sub.add_parser("demo-yaw-compare", help="fused vs ZYX Euler yaw under re-chosen x/y axes")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("-n", type=int, default=10)
    sp.add_argument("--betas", type=int, default=72, help="number of axis re-choice angles")
    sp.set_defaults(func=cmd_demo_yaw_compare)

    sp = sub.add_parser("random", help="Haar-uniform random rotations")
    sp.add_argument("-n", type=int, default=1)
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--repr", choices=reprs, default="quat")
    sp.add_argument("--deg", action="store_true")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_random)
    return p


def main(argv=None, out=None):
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args.func(args, out)
    except ParseError as exc:
        sys.stderr.write(f"fusedangles: error: {exc}\n")
        return EXIT_PARSE
    except DomainError as exc:
        sys.stderr.write(f"fusedangles: domain error: {exc}\n")
        return EXIT_DOMAIN
    return EXIT_OK


def run():
    sys.exit(main())
