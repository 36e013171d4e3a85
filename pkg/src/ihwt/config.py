"""Flat ``key = value`` experiment configuration files."""
from dataclasses import fields, replace

from .experiments import ExperimentConfig

__all__ = ["ConfigError", "parse_config", "parse_config_text", "format_config", "parse_value"]

# file key -> dataclass field
_ALIASES = {"N": "n", "noise_sigma": "sigma", "solver": "solvers"}
_INT_LISTS = {"m", "s"}
_INT_PAIRS = {"a_range", "b_range"}
_STR_LISTS = {"solvers"}
_INTS = {"n", "trials", "seed", "max_iters"}
_FLOATS = {"sigma", "recovery_tol", "spectral_norm", "halt_tol"}
_STRS = {"protocol", "projection", "matrix_scaling"}


class ConfigError(ValueError):
    def __init__(self, msg, line=None):
        self.line = line
        super().__init__(f"line {line}: {msg}" if line is not None else msg)


def _int_list(text):
    out = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            # a..b or a..b:step, inclusive
            rng, _, step = part.partition(":")
            lo, hi = (int(v) for v in rng.split(".."))
            step = int(step) if step else 1
            if step < 1 or hi < lo:
                raise ValueError(f"bad range {part!r}")
            out.extend(range(lo, hi + 1, step))
        elif part:
            out.append(int(part))
    if not out:
        raise ValueError("empty list")
    return tuple(out)


def parse_value(key, text):
    """Convert the text of one entry to the field's Python type."""
    key = _ALIASES.get(key, key)
    text = text.strip()
    if key in _INT_LISTS:
        return key, _int_list(text)
    if key in _INT_PAIRS:
        vals = tuple(int(v) for v in text.replace("..", ",").split(","))
        if len(vals) != 2:
            raise ValueError(f"{key} needs two integers")
        return key, vals
    if key in _STR_LISTS:
        vals = tuple(v.strip() for v in text.split(",") if v.strip())
        if not vals:
            raise ValueError("empty list")
        return key, vals
    if key in _INTS:
        return key, int(text)
    if key in _FLOATS:
        return key, float(text)
    if key in _STRS:
        if not text:
            raise ValueError("empty value")
        return key, text
    raise KeyError(key)


def parse_config_text(text, base=None, overrides=None):
    """Parse configuration text on top of ``base`` (defaults if None).

    ``overrides`` (a dict of field values) is applied last, so command-line
    flags win over the file.
    """
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", lineno)
        key, _, val = line.partition("=")
        key = key.strip()
        try:
            name, parsed = parse_value(key, val)
        except KeyError:
            raise ConfigError(f"unknown key {key!r}", lineno) from None
        except ValueError as exc:
            raise ConfigError(f"malformed value for {key!r}: {exc}", lineno) from None
        values[name] = parsed
    values.update(overrides or {})
    try:
        return replace(base or ExperimentConfig(), **values)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def parse_config(path, base=None, overrides=None):
    with open(path, encoding="utf-8") as fh:
        return parse_config_text(fh.read(), base, overrides)


def _fmt_int_list(vals):
    vals = list(vals)
    if len(vals) > 2 and all(b - a == 1 for a, b in zip(vals, vals[1:])):
        return f"{vals[0]}..{vals[-1]}"
    return ",".join(str(v) for v in vals)


def format_config(cfg):
    """Serialise a config so that ``parse_config_text`` reproduces it."""
    lines = []
    for f in fields(cfg):
        val = getattr(cfg, f.name)
        key = "N" if f.name == "n" else f.name
        if f.name in _INT_LISTS:
            text = _fmt_int_list(val)
        elif f.name in _INT_PAIRS or f.name in _STR_LISTS:
            text = ",".join(str(v) for v in val)
        elif f.name in _FLOATS:
            text = repr(float(val))
        else:
            text = str(val)
        lines.append(f"{key} = {text}")
    return "\n".join(lines) + "\n"
