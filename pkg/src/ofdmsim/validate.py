"""Self-checks comparing the simulator against its analytic references.

Three families of checks:

* theory match -- raw 8-PSK over AWGN against the closed-form BER, at
  Eb/No 4/8/12 dB, within 10% relative and inside the z=3 Wilson interval;
* transparency -- the full OFDM chain over AWGN (N=64 and 512, CP 1/4, no
  overhead accounting) must be statistically indistinguishable from the
  raw modem at the same Eb/No (overlapping z=3 intervals);
* noiseless identity -- every (FFT size, CP fraction, channel) grid cell
  recovers its bits exactly when the noise is effectively off and the
  delay-line memory fits inside the cyclic prefix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .bitsource import DEFAULT_MASTER_SEED
from .channel import ChannelSpec, exponential_pdp
from .framing import OfdmConfig
from .metrics import theoretical_mpsk_ber, wilson_interval
from .sweep import run_cell, run_raw_modem

THEORY_EBNO_POINTS_DB = (4.0, 8.0, 12.0)
TRANSPARENCY_FFT_SIZES = (64, 512)
IDENTITY_CP_FRACTIONS = (
    Fraction(1, 32),
    Fraction(1, 16),
    Fraction(1, 8),
    Fraction(1, 4),
    Fraction(1, 2),
)
#: Effectively noiseless Eb/No used by the identity checks.
NOISELESS_EBNO_DB = 300.0

_REL_TOLERANCE = 0.10
_MAX_BITS_MULTIPLIER = 30  # cap on the per-point upscaling for rare-error points


def intervals_overlap(a: tuple[float, float], b: tuple[float, float]) -> bool:
    return not (a[1] < b[0] or b[1] < a[0])


def _point_bits(bits_floor: int, theory_ber: float) -> int:
    """Bits for one theory point: at least the floor, scaled up (capped)
    so the point collects on the order of a thousand errors."""
    wanted = math.ceil(1200.0 / (theory_ber * bits_floor))
    return bits_floor * min(_MAX_BITS_MULTIPLIER, max(1, wanted))


@dataclass(frozen=True)
class ValidationRow:
    check: str
    detail: str
    observed: str
    passed: bool


def run_validation(
    seed: int = DEFAULT_MASTER_SEED,
    bits_floor: int = 1_000_000,
    noise_scale: float = 1.0,
    z: float = 3.0,
) -> tuple[list[ValidationRow], bool]:
    """Run the full validation suite; returns (rows, all_passed)."""
    rows: list[ValidationRow] = []
    order = 8

    # theory match, and the raw-modem baselines reused by the transparency check
    baselines: dict[float, tuple[float, tuple[float, float], int]] = {}
    for i, ebno in enumerate(THEORY_EBNO_POINTS_DB):
        theory = theoretical_mpsk_ber(ebno, order)
        n_bits = _point_bits(bits_floor, theory)
        errors, sent = run_raw_modem(
            order, ebno, n_bits, seed, cell_id=9001 + i, noise_scale=noise_scale
        )
        ber = errors / sent
        ci = wilson_interval(errors, sent, z)
        rel = abs(ber - theory) / theory
        ok = rel <= _REL_TOLERANCE and ci[0] <= theory <= ci[1]
        baselines[ebno] = (ber, ci, n_bits)
        rows.append(ValidationRow(
            check="awgn-theory",
            detail=f"M={order} Eb/No={ebno:g}dB bits={sent}",
            observed=f"sim={ber:.4e} theory={theory:.4e} rel={rel:.3f}",
            passed=ok,
        ))

    # OFDM transparency against the raw-modem baselines
    awgn = ChannelSpec(kind="awgn")
    for j, fft_size in enumerate(TRANSPARENCY_FFT_SIZES):
        config = OfdmConfig(
            fft_size=fft_size, cp_fraction=Fraction(1, 4),
            modulation_order=order, bit_budget=240_000,
        )
        for i, ebno in enumerate(THEORY_EBNO_POINTS_DB):
            _, base_ci, n_bits = baselines[ebno]
            record = run_cell(
                config, awgn, ebno, seed, 9101 + 10 * j + i,
                target_errors=2**62, max_bits=n_bits, noise_scale=noise_scale,
            )
            ci = (record.ci_low, record.ci_high)
            ok = intervals_overlap(ci, base_ci)
            rows.append(ValidationRow(
                check="ofdm-transparency",
                detail=f"N={fft_size} CP=1/4 Eb/No={ebno:g}dB bits={record.bits_sent}",
                observed=f"ofdm={record.ber:.4e} raw_ci=[{base_ci[0]:.3e},{base_ci[1]:.3e}]",
                passed=ok,
            ))

    # noiseless identity across the whole grid, all three channels
    cell = 9201
    for fft_size in (64, 128, 256, 512):
        for frac in IDENTITY_CP_FRACTIONS:
            config = OfdmConfig(
                fft_size=fft_size, cp_fraction=frac,
                modulation_order=order, bit_budget=1500,
            )
            memory = min(8, config.cp_len)
            for spec in (
                ChannelSpec(kind="awgn"),
                ChannelSpec(kind="flat"),
                ChannelSpec(kind="tdl", taps=tuple(exponential_pdp(memory + 1, 1.0))),
            ):
                record = run_cell(
                    config, spec, NOISELESS_EBNO_DB, seed, cell,
                    target_errors=1, max_bits=4500,
                )
                cell += 1
                rows.append(ValidationRow(
                    check="noiseless-identity",
                    detail=f"N={fft_size} CP={frac} {spec.kind}",
                    observed=f"errors={record.bit_errors}/{record.bits_sent}",
                    passed=record.bit_errors == 0,
                ))

    return rows, all(r.passed for r in rows)


def format_table(rows: list[ValidationRow]) -> str:
    lines = [f"{'status':6}  {'check':18}  {'point':34}  observation"]
    for row in rows:
        status = "PASS" if row.passed else "FAIL"
        lines.append(f"{status:6}  {row.check:18}  {row.detail:34}  {row.observed}")
    return "\n".join(lines)
