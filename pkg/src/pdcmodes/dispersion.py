"""Temperature-dependent crystal dispersion from Sellmeier coefficient data.

Crystals are described by data files (one YAML document per crystal) holding
per-axis Sellmeier coefficient sets; see ``load_crystal``. All evaluation is
pure: a loaded :class:`CrystalModel` is immutable and safe to share between
threads.

Units at the public boundary are the conventional ones for this domain
(wavelength in µm, temperature in °C, GVD in ps²/m); wavevector derivatives
used internally by the phase-matching and JSA modules are plain SI (s/m,
s²/m, rad/m at angular frequency rad/s).

Derivatives of k(ω) are closed-form: each functional form supplies analytic
dn/dλ and d²n/dλ², converted via

    group index  m = c·dk/dω = n − λ·dn/dλ
    GVD          k″ = d²k/dω² = λ³/(2πc²)·d²n/dλ²

so no finite-difference step tuning enters the library (a finite-difference
cross-check lives in the test suite).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType
from typing import Mapping

import numpy as np
import yaml
from importlib import resources
from scipy.constants import c

from .errors import DomainError, ValidationError

__all__ = [
    "SellmeierSet",
    "GayerTwoPole",
    "StandardSellmeier",
    "CrystalModel",
    "load_crystal",
    "load_crystal_file",
    "load_bundled_crystal",
    "bundled_crystal_path",
    "refractive_index",
    "wavevector",
    "group_index",
    "gvd",
    "wavevector_at_omega",
    "k_prime",
    "k_double_prime",
]

UNIAXIAL_AXES = ("o", "e")
BIAXIAL_AXES = ("x", "y", "z")

# temperatures (°C) at which the n > 1 invariant is checked on load
_VALIDATION_TEMPS = (0.0, 100.0, 200.0)
_VALIDATION_SAMPLES = 64


class SellmeierSet:
    """One optical axis' dispersion model.

    Subclasses implement n(λ, T) and its closed-form wavelength derivatives
    for a specific functional form; λ in µm, T in °C, derivatives per µm.
    """

    form: str = ""

    def n_squared(self, lam_um, t_c):
        raise NotImplementedError

    def dn2_dlam(self, lam_um, t_c):
        raise NotImplementedError

    def d2n2_dlam2(self, lam_um, t_c):
        raise NotImplementedError

    def n(self, lam_um, t_c):
        return np.sqrt(self.n_squared(lam_um, t_c))

    def dn_dlam(self, lam_um, t_c):
        g = self.n_squared(lam_um, t_c)
        return self.dn2_dlam(lam_um, t_c) / (2.0 * np.sqrt(g))

    def d2n_dlam2(self, lam_um, t_c):
        g = self.n_squared(lam_um, t_c)
        gp = self.dn2_dlam(lam_um, t_c)
        gpp = self.d2n2_dlam2(lam_um, t_c)
        return gpp / (2.0 * np.sqrt(g)) - gp * gp / (4.0 * g ** 1.5)

    def coefficients(self) -> dict:
        raise NotImplementedError


def _require_keys(mapping: Mapping, required: tuple, context: str) -> None:
    missing = [k for k in required if k not in mapping]
    unknown = [k for k in mapping if k not in required]
    if missing:
        raise ValidationError(f"{context}: missing coefficient(s) {missing}")
    if unknown:
        raise ValidationError(f"{context}: unknown coefficient(s) {unknown}")


class GayerTwoPole(SellmeierSet):
    """Two-pole Sellmeier with a quadratic temperature parameter.

        n² = a1 + b1·f + (a2 + b2·f)/(λ² − (a3 + b3·f)²)
           + (a4 + b4·f)/(λ² − a5²) − a6·λ²,
        f  = (T − T0)·(T + T0 + 2·273.16)

    The form used by Gayer et al., Appl. Phys. B 91, 343 (2008) for
    MgO-doped congruent lithium niobate; T0 is the reference temperature
    (`t_ref_c`, 24.5 °C for that data set).
    """

    form = "gayer_two_pole"
    _KEYS = ("a1", "a2", "a3", "a4", "a5", "a6",
             "b1", "b2", "b3", "b4", "t_ref_c")

    def __init__(self, **coeffs: float):
        _require_keys(coeffs, self._KEYS, "gayer_two_pole")
        for key in self._KEYS:
            setattr(self, key, float(coeffs[key]))

    def _f(self, t_c):
        return (t_c - self.t_ref_c) * (t_c + self.t_ref_c + 2.0 * 273.16)

    def n_squared(self, lam_um, t_c):
        f = self._f(t_c)
        lam2 = np.square(lam_um)
        pole1 = (self.a3 + self.b3 * f) ** 2
        return (self.a1 + self.b1 * f
                + (self.a2 + self.b2 * f) / (lam2 - pole1)
                + (self.a4 + self.b4 * f) / (lam2 - self.a5 ** 2)
                - self.a6 * lam2)

    def dn2_dlam(self, lam_um, t_c):
        f = self._f(t_c)
        lam2 = np.square(lam_um)
        d1 = lam2 - (self.a3 + self.b3 * f) ** 2
        d2 = lam2 - self.a5 ** 2
        return -2.0 * lam_um * ((self.a2 + self.b2 * f) / d1 ** 2
                                + (self.a4 + self.b4 * f) / d2 ** 2
                                + self.a6)

    def d2n2_dlam2(self, lam_um, t_c):
        f = self._f(t_c)
        lam2 = np.square(lam_um)
        q1 = (self.a3 + self.b3 * f) ** 2
        q2 = self.a5 ** 2
        d1 = lam2 - q1
        d2 = lam2 - q2
        return ((self.a2 + self.b2 * f) * (6.0 * lam2 + 2.0 * q1) / d1 ** 3
                + (self.a4 + self.b4 * f) * (6.0 * lam2 + 2.0 * q2) / d2 ** 3
                - 2.0 * self.a6)

    def coefficients(self) -> dict:
        return {k: getattr(self, k) for k in self._KEYS}


class StandardSellmeier(SellmeierSet):
    """Classic pole-sum Sellmeier with an optional linear thermo-optic term.

        n²(λ) = a + Σᵢ bᵢ·λ²/(λ² − cᵢ) − d·λ²
        n(λ, T) = n(λ) + dn_dt·(T − t_ref_c)

    Suitable for user-supplied crystals whose published data come as
    B/C pole pairs plus a dn/dT coefficient.
    """

    form = "sellmeier_standard"
    _KEYS = ("a", "b", "c", "d", "dn_dt", "t_ref_c")

    def __init__(self, **coeffs: float | list):
        _require_keys(coeffs, self._KEYS, "sellmeier_standard")
        self.a = float(coeffs["a"])
        self.b = tuple(float(v) for v in coeffs["b"])
        self.c = tuple(float(v) for v in coeffs["c"])
        self.d = float(coeffs["d"])
        self.dn_dt = float(coeffs["dn_dt"])
        self.t_ref_c = float(coeffs["t_ref_c"])
        if len(self.b) != len(self.c):
            raise ValidationError(
                "sellmeier_standard: b and c pole lists differ in length")

    def _n_lam(self, lam_um):
        lam2 = np.square(lam_um)
        g = self.a - self.d * lam2
        for bi, ci in zip(self.b, self.c):
            g = g + bi * lam2 / (lam2 - ci)
        return np.sqrt(g)

    def n(self, lam_um, t_c):
        return self._n_lam(lam_um) + self.dn_dt * (t_c - self.t_ref_c)

    def n_squared(self, lam_um, t_c):
        return np.square(self.n(lam_um, t_c))

    def dn_dlam(self, lam_um, t_c):
        lam2 = np.square(lam_um)
        gp = -2.0 * self.d * lam_um
        for bi, ci in zip(self.b, self.c):
            gp = gp + bi * (-2.0 * lam_um * ci) / (lam2 - ci) ** 2
        return gp / (2.0 * self._n_lam(lam_um))

    def d2n_dlam2(self, lam_um, t_c):
        lam2 = np.square(lam_um)
        gp = -2.0 * self.d * lam_um
        gpp = -2.0 * self.d
        for bi, ci in zip(self.b, self.c):
            den = lam2 - ci
            gp = gp + bi * (-2.0 * lam_um * ci) / den ** 2
            gpp = gpp + 2.0 * bi * ci * (3.0 * lam2 + ci) / den ** 3
        nl = self._n_lam(lam_um)
        return gpp / (2.0 * nl) - gp * gp / (4.0 * nl ** 3)

    def coefficients(self) -> dict:
        return {"a": self.a, "b": list(self.b), "c": list(self.c),
                "d": self.d, "dn_dt": self.dn_dt, "t_ref_c": self.t_ref_c}


_FORMS = {cls.form: cls for cls in (GayerTwoPole, StandardSellmeier)}

# temperature-model identifiers compatible with each functional form
_TEMPERATURE_MODELS = {
    "gayer_f_parameter": ("gayer_two_pole",),
    "linear_dn_dt": ("sellmeier_standard",),
    "none": ("sellmeier_standard",),
}


@dataclass(frozen=True)
class CrystalModel:
    """A named dispersion model: per-axis Sellmeier sets plus metadata.

    Immutable after load; every operation on it is a pure function.
    """

    name: str
    crystal_class: str                     # "uniaxial" | "biaxial"
    axes: Mapping[str, SellmeierSet]       # "o"/"e" or "x"/"y"/"z"
    temperature_model: str
    d_eff_pm_per_v: float
    valid_range_um: tuple[float, float]
    provenance: str = field(repr=False, default="")

    def axis(self, label: str) -> SellmeierSet:
        try:
            return self.axes[label]
        except KeyError:
            raise DomainError(
                f"axis {label!r} not defined for crystal {self.name!r}; "
                f"available: {sorted(self.axes)}") from None


_CRYSTAL_KEYS = ("name", "class", "sellmeier", "temperature_model",
                 "d_eff_pm_per_V", "valid_range_um", "provenance")


def load_crystal(data: str | Mapping) -> CrystalModel:
    """Parse and validate one crystal document (YAML text or mapping).

    Raises :class:`ValidationError` on schema violations or on coefficient
    sets that produce a non-physical index (n ≤ 1, poles, non-finite values)
    anywhere in the declared validity range at 0–200 °C.
    """
    if isinstance(data, str):
        try:
            doc = yaml.safe_load(data)
        except yaml.YAMLError as exc:
            raise ValidationError(f"crystal file is not valid YAML: {exc}") from exc
    else:
        doc = data
    if not isinstance(doc, Mapping):
        raise ValidationError("crystal file must contain a single mapping")

    unknown = [k for k in doc if k not in _CRYSTAL_KEYS]
    if unknown:
        raise ValidationError(f"crystal file: unknown key(s) {unknown}")
    missing = [k for k in _CRYSTAL_KEYS if k not in doc]
    if missing:
        raise ValidationError(f"crystal file: missing key(s) {missing}")

    name = str(doc["name"])
    crystal_class = str(doc["class"])
    if crystal_class == "uniaxial":
        allowed_axes = UNIAXIAL_AXES
    elif crystal_class == "biaxial":
        allowed_axes = BIAXIAL_AXES
    else:
        raise ValidationError(
            f"crystal class must be 'uniaxial' or 'biaxial', got {crystal_class!r}")

    rng = doc["valid_range_um"]
    if (not isinstance(rng, (list, tuple)) or len(rng) != 2
            or not all(isinstance(v, (int, float)) for v in rng)):
        raise ValidationError("valid_range_um must be a [lo, hi] pair in µm")
    lo, hi = float(rng[0]), float(rng[1])
    if not (0.0 < lo < hi):
        raise ValidationError(
            f"valid_range_um must be a non-empty positive interval, got [{lo}, {hi}]")

    d_eff = doc["d_eff_pm_per_V"]
    if not isinstance(d_eff, (int, float)) or not d_eff > 0:
        raise ValidationError(f"d_eff_pm_per_V must be > 0, got {d_eff!r}")

    t_model = str(doc["temperature_model"])
    if t_model not in _TEMPERATURE_MODELS:
        raise ValidationError(
            f"unknown temperature_model {t_model!r}; "
            f"known: {sorted(_TEMPERATURE_MODELS)}")

    blocks = doc["sellmeier"]
    if not isinstance(blocks, Mapping) or not blocks:
        raise ValidationError("sellmeier must map at least one axis to a coefficient block")
    axes: dict[str, SellmeierSet] = {}
    for label, block in blocks.items():
        if label not in allowed_axes:
            raise ValidationError(
                f"axis label {label!r} invalid for a {crystal_class} crystal; "
                f"allowed: {list(allowed_axes)}")
        if not isinstance(block, Mapping) or set(block) != {"form", "coefficients"}:
            raise ValidationError(
                f"sellmeier block for axis {label!r} must have exactly "
                "'form' and 'coefficients'")
        form = str(block["form"])
        if form not in _FORMS:
            raise ValidationError(
                f"unknown sellmeier form {form!r}; known: {sorted(_FORMS)}")
        if form not in _TEMPERATURE_MODELS[t_model]:
            raise ValidationError(
                f"temperature_model {t_model!r} is incompatible with form {form!r}")
        coeffs = block["coefficients"]
        if not isinstance(coeffs, Mapping):
            raise ValidationError(
                f"coefficients for axis {label!r} must be a mapping")
        axes[label] = _FORMS[form](**coeffs)

    model = CrystalModel(
        name=name,
        crystal_class=crystal_class,
        axes=MappingProxyType(axes),
        temperature_model=t_model,
        d_eff_pm_per_v=float(d_eff),
        valid_range_um=(lo, hi),
        provenance=str(doc["provenance"]),
    )
    _validate_physical(model)
    return model


def _validate_physical(model: CrystalModel) -> None:
    """Check n is real, finite and > 1 across the validity range at 0-200 °C."""
    lo, hi = model.valid_range_um
    lam = np.linspace(lo, hi, _VALIDATION_SAMPLES)
    for label, sell in model.axes.items():
        for t_c in _VALIDATION_TEMPS:
            with np.errstate(invalid="ignore", divide="ignore"):
                n2 = np.asarray(sell.n_squared(lam, t_c), dtype=float)
            if not np.all(np.isfinite(n2)) or np.any(n2 <= 0):
                raise ValidationError(
                    f"crystal {model.name!r}, axis {label!r}: n² is not finite "
                    f"and positive across [{lo}, {hi}] µm at {t_c} °C "
                    "(pole inside the validity range?)")
            n = np.sqrt(n2)
            if np.any(n <= 1.0):
                raise ValidationError(
                    f"crystal {model.name!r}, axis {label!r}: n ≤ 1 at "
                    f"{lam[np.argmin(n)]:.4g} µm, {t_c} °C "
                    f"(min n = {n.min():.6g})")


def load_crystal_file(path: str | Path) -> CrystalModel:
    """Load a crystal data file from disk (I/O errors propagate as OSError)."""
    text = Path(path).read_text(encoding="utf-8")
    return load_crystal(text)


def bundled_crystal_path(name: str = "mgoln_5pct") -> Path:
    """Filesystem path of a crystal file shipped with the package."""
    return Path(resources.files("pdcmodes").joinpath(f"data/{name}.yaml"))


def load_bundled_crystal(name: str = "mgoln_5pct") -> CrystalModel:
    """Load a crystal shipped with the package (default: 5% MgO:LN)."""
    return load_crystal(bundled_crystal_path(name).read_text(encoding="utf-8"))


# ---------------------------------------------------------------------------
# evaluation


def _check_range(crystal: CrystalModel, lam_um, strict: bool) -> None:
    lo, hi = crystal.valid_range_um
    lam = np.asarray(lam_um, dtype=float)
    bad = (lam < lo) | (lam > hi) if not strict else (lam <= lo) | (lam >= hi)
    if np.any(bad):
        offender = float(lam[bad].flat[0]) if lam.ndim else float(lam)
        raise DomainError(
            f"wavelength {offender:.6g} µm outside the valid range "
            f"[{lo:g}, {hi:g}] µm of crystal {crystal.name!r}")


def refractive_index(crystal: CrystalModel, axis: str, wavelength_um,
                     temperature_c: float):
    """Refractive index n(λ, T); λ in µm, T in °C. Scalar in, scalar out."""
    sell = crystal.axis(axis)
    _check_range(crystal, wavelength_um, strict=False)
    n = sell.n(wavelength_um, temperature_c)
    return float(n) if np.isscalar(wavelength_um) else n


def wavevector(crystal: CrystalModel, axis: str, wavelength_um,
               temperature_c: float):
    """Wavevector k = n·ω/c in rad/m at vacuum wavelength λ (µm)."""
    sell = crystal.axis(axis)
    _check_range(crystal, wavelength_um, strict=False)
    k = 2.0e6 * np.pi * sell.n(wavelength_um, temperature_c) / np.asarray(wavelength_um, dtype=float)
    return float(k) if np.isscalar(wavelength_um) else k


def wavevector_at_omega(crystal: CrystalModel, axis: str, omega_rad_s,
                        temperature_c: float):
    """Wavevector k(ω) in rad/m at angular frequency ω (rad/s, SI)."""
    lam_um = 2.0e6 * np.pi * c / np.asarray(omega_rad_s, dtype=float)
    sell = crystal.axis(axis)
    _check_range(crystal, lam_um, strict=False)
    k = sell.n(lam_um, temperature_c) * np.asarray(omega_rad_s, dtype=float) / c
    return float(k) if np.isscalar(omega_rad_s) else k


def k_prime(crystal: CrystalModel, axis: str, wavelength_um,
            temperature_c: float):
    """dk/dω in s/m (inverse group velocity), closed form."""
    sell = crystal.axis(axis)
    _check_range(crystal, wavelength_um, strict=True)
    n = sell.n(wavelength_um, temperature_c)
    dn = sell.dn_dlam(wavelength_um, temperature_c)
    kp = (n - np.asarray(wavelength_um, dtype=float) * dn) / c
    return float(kp) if np.isscalar(wavelength_um) else kp


def k_double_prime(crystal: CrystalModel, axis: str, wavelength_um,
                   temperature_c: float):
    """d²k/dω² in s²/m (group-velocity dispersion), closed form."""
    sell = crystal.axis(axis)
    _check_range(crystal, wavelength_um, strict=True)
    lam_m = np.asarray(wavelength_um, dtype=float) * 1e-6
    d2n_per_m2 = sell.d2n_dlam2(wavelength_um, temperature_c) * 1e12
    kpp = lam_m ** 3 * d2n_per_m2 / (2.0 * np.pi * c ** 2)
    return float(kpp) if np.isscalar(wavelength_um) else kpp


def group_index(crystal: CrystalModel, axis: str, wavelength_um,
                temperature_c: float):
    """Group index m = c·dk/dω = n − λ·dn/dλ (dimensionless)."""
    kp = k_prime(crystal, axis, wavelength_um, temperature_c)
    return c * kp


def gvd(crystal: CrystalModel, axis: str, wavelength_um, temperature_c: float):
    """Group-velocity dispersion k″ in ps²/m."""
    return k_double_prime(crystal, axis, wavelength_um, temperature_c) * 1e24
