"""State files (JSON) and figure tables (CSV)."""
import csv
import json
import re
import sys

import numpy as np

from . import states as st
from .errors import ConstraintViolation

# States read from files are renormalized silently below this deviation.
FILE_NORM_TOL = 1e-6
CSV_FORMAT = ".9g"


class StateFileError(ValueError):
    """A state file that cannot be parsed."""


def _amplitudes(obj):
    if "amp" in obj:
        amp = obj["amp"]
        if len(amp) != 8 or any(len(a) != 2 for a in amp):
            raise StateFileError('"amp" must hold 8 [re, im] pairs')
        return np.array([complex(float(re), float(im)) for re, im in amp])
    if "gsd" in obj:
        p = obj["gsd"]
        t = [p["t"]] * 3 if "t" in p else [p["t1"], p["t2"], p["t3"]]
        amp = np.zeros(8, dtype=complex)
        amp[0] = float(p["g"])
        amp[3], amp[5], amp[6] = (float(x) for x in t)
        amp[7] = float(p["h"]) * np.exp(1j * float(p.get("gamma", 0.0)))
        return amp
    raise StateFileError('state file needs an "amp" or a "gsd" entry')


def parse_state(obj, force_normalize=False):
    """Amplitudes from a decoded state-file object.

    Raises
    ------
    StateFileError
        On malformed content.
    ConstraintViolation
        If the norm is off by more than 1e-6 and ``force_normalize`` is false.
    """
    try:
        amp = _amplitudes(obj)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, StateFileError):
            raise
        raise StateFileError(f"malformed state file: {exc}") from exc
    if not np.all(np.isfinite(amp)):
        raise StateFileError("amplitudes must be finite")
    err = abs(np.vdot(amp, amp).real - 1)
    if err > FILE_NORM_TOL and not force_normalize:
        raise ConstraintViolation(f"state is not normalized (|norm^2 - 1| = {err:.3e})")
    return st.normalize(amp)


def load_state(path, force_normalize=False):
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as exc:
        raise StateFileError(f"{path}: {exc}") from exc
    if not isinstance(obj, dict):
        raise StateFileError("state file must hold a JSON object")
    return parse_state(obj, force_normalize)


def state_to_json(state):
    return {"amp": [[float(a.real), float(a.imag)] for a in np.asarray(state, dtype=complex)]}


def parse_angle(text):
    """Parse ``'1.2'``, ``'pi/2'``, ``'2pi/5'`` or ``'2*pi/5'`` into radians."""
    s = text.strip().replace(" ", "")
    m = re.fullmatch(r"([0-9.]*)\*?pi(?:/([0-9.]+))?", s)
    if m:
        num = float(m.group(1)) if m.group(1) else 1.0
        den = float(m.group(2)) if m.group(2) else 1.0
        return num * np.pi / den
    return float(s)


def _cell(x):
    if x is None or (isinstance(x, float) and np.isnan(x)):
        return ""
    if isinstance(x, (float, np.floating)):
        return format(float(x), CSV_FORMAT)
    return str(x)


def write_csv(path, header, rows):
    """Write a header plus rows, floats with 9 significant digits; ``'-'`` means stdout."""
    fh = sys.stdout if path in (None, "-") else open(path, "w", newline="")
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_cell(x) for x in row])
    finally:
        if fh is not sys.stdout:
            fh.close()


def write_json(path, obj):
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)
