"""Experiment grid execution: Monte Carlo cells, persistence, and plots.

A sweep cell is identified by ``(master_seed, cell_id)`` and owns a private
random substream, so cells may run on any number of worker processes and
the output records are byte-identical regardless of scheduling.

Per-repetition draw order inside a cell (fixed for reproducibility):
information bits, then channel gains, then noise samples.
"""

from __future__ import annotations

import csv
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Any, Iterable, Optional

import numpy as np

from .bitsource import DEFAULT_MASTER_SEED, draw_bits, make_stream
from .channel import (
    FLAT,
    TDL,
    ChannelSpec,
    apply_channel,
    complex_gaussian,
    ebno_to_noise_variance,
    realize_channel,
)
from .equalizer import channel_freq_response, zero_forcing
from .errors import IoError
from .framing import OfdmConfig, add_cyclic_prefix, remove_cyclic_prefix, serial_to_parallel
from .metrics import CSV_COLUMNS, BerRecord, count_bit_errors, make_record
from .psk import demap_psk, map_psk
from .svgplot import emit_plot  # re-exported: plotting is part of the sweep surface
from .transform import unitary_dft, unitary_idft

__all__ = [
    "SweepGrid",
    "SweepFailure",
    "run_cell",
    "run_grid",
    "run_raw_modem",
    "write_records",
    "read_records",
    "emit_plot",
]

#: Default experiment axes (cyclic-prefix set from the reference experiment grid).
DEFAULT_FFT_SIZES = (64, 128, 256, 512)
DEFAULT_CP_FRACTIONS = (
    Fraction(1, 2),
    Fraction(1, 4),
    Fraction(1, 16),
    Fraction(1, 32),
)
DEFAULT_EBNO_POINTS_DB = tuple(float(e) for e in range(0, 21, 2))


@dataclass(frozen=True)
class SweepGrid:
    """Cross product of OFDM configs x Eb/No points under one channel model.

    Cell ids are the lexicographic index over (fft_size, cp_fraction,
    ebno_db), with Eb/No varying fastest.
    """

    fft_sizes: tuple[int, ...] = DEFAULT_FFT_SIZES
    cp_fractions: tuple[Fraction, ...] = DEFAULT_CP_FRACTIONS
    ebno_points_db: tuple[float, ...] = DEFAULT_EBNO_POINTS_DB
    channel: ChannelSpec = ChannelSpec(kind="awgn")
    modulation_order: int = 8
    master_seed: int = DEFAULT_MASTER_SEED
    max_bits_per_cell: int = 2_000_000
    target_errors: int = 100
    bit_budget: int = 1000
    use_equalizer: bool = True

    def __post_init__(self) -> None:
        object.__setattr__(self, "fft_sizes", tuple(int(n) for n in self.fft_sizes))
        object.__setattr__(
            self, "cp_fractions", tuple(Fraction(g) for g in self.cp_fractions)
        )
        object.__setattr__(
            self, "ebno_points_db", tuple(float(e) for e in self.ebno_points_db)
        )
        if not (self.fft_sizes and self.cp_fractions and self.ebno_points_db):
            raise ValueError("grid axes must be nonempty")
        if self.max_bits_per_cell < 1 or self.target_errors < 1:
            raise ValueError("per-cell budgets must be >= 1")
        for n in self.fft_sizes:
            for g in self.cp_fractions:
                self._config(n, g)  # reject invalid (N, G) combinations up front

    def _config(self, fft_size: int, cp_fraction: Fraction) -> OfdmConfig:
        return OfdmConfig(
            fft_size=fft_size,
            cp_fraction=cp_fraction,
            modulation_order=self.modulation_order,
            bit_budget=self.bit_budget,
        )

    @property
    def n_cells(self) -> int:
        return len(self.fft_sizes) * len(self.cp_fractions) * len(self.ebno_points_db)

    def cells(self) -> Iterable[tuple[int, OfdmConfig, ChannelSpec]]:
        """Yield (cell_id, config, channel-with-ebno) in cell_id order."""
        cell_id = 0
        for n in self.fft_sizes:
            for g in self.cp_fractions:
                config = self._config(n, g)
                for ebno in self.ebno_points_db:
                    yield cell_id, config, replace(self.channel, ebno_db=ebno)
                    cell_id += 1


class SweepFailure(RuntimeError):
    """Raised when some cells failed; completed records are preserved."""

    def __init__(self, failures: list[tuple[int, str]], records: list[BerRecord]):
        self.failures = failures
        self.records = records
        detail = "; ".join(f"cell {cid}: {msg}" for cid, msg in failures)
        super().__init__(f"{len(failures)} cell(s) failed ({detail})")


def _run_chain_once(
    tx_bits: np.ndarray,
    config: OfdmConfig,
    channel: ChannelSpec,
    sigma2: float,
    stream,
    use_equalizer: bool,
) -> tuple[int, int]:
    """One repetition of the full transmit/channel/receive chain.

    Returns (bit errors, zero-forcing clamps) for this batch.
    """
    n_fft, cp_len, order = config.fft_size, config.cp_len, config.modulation_order

    symbols = map_psk(tx_bits, order)
    matrix, used = serial_to_parallel(symbols, n_fft)
    tx_rows = add_cyclic_prefix(unitary_idft(matrix, axis=-1), cp_len)
    n_frames = tx_rows.shape[0]

    response: Optional[np.ndarray]
    if channel.kind == FLAT:
        # block fading: one gain per OFDM symbol
        gains = complex_gaussian(stream, n_frames, 1.0)
        serial = (tx_rows * gains[:, None]).ravel()
        if sigma2 > 0.0:
            serial = serial + complex_gaussian(stream, serial.size, sigma2)
        response = gains[:, None]
    else:
        real = realize_channel(channel, stream, noise_variance=sigma2)
        serial = apply_channel(tx_rows.ravel(), real, stream)
        response = channel_freq_response(real, n_fft)[None, :] if channel.kind == TDL else None

    payload = remove_cyclic_prefix(serial.reshape(n_frames, n_fft + cp_len), n_fft, cp_len)
    freq = unitary_dft(payload, axis=-1)

    clamps = 0
    if use_equalizer and response is not None:
        freq, clamps = zero_forcing(freq, response)

    rx_bits = demap_psk(freq.ravel()[:used], order)
    errors, _ = count_bit_errors(tx_bits, rx_bits)
    return errors, clamps


def run_cell(
    config: OfdmConfig,
    channel: ChannelSpec,
    ebno_db: float,
    seed: int,
    cell_id: int,
    *,
    target_errors: int = 100,
    max_bits: int = 2_000_000,
    use_equalizer: bool = True,
    noise_scale: float = 1.0,
) -> BerRecord:
    """Measure one grid cell's BER.

    Repetitions of ``config.bit_budget`` bits run through the full chain,
    each under a fresh channel realization, until ``target_errors`` bit
    errors have accumulated or ``max_bits`` bits have been sent.
    ``noise_scale`` multiplies the calibrated noise variance (diagnostics
    hook; leave at 1.0 for honest measurements).
    """
    if target_errors < 1 or max_bits < 1:
        raise ValueError("target_errors and max_bits must be >= 1")
    stream = make_stream(seed, cell_id)
    b = config.bits_per_symbol
    sigma2 = noise_scale * ebno_to_noise_variance(
        ebno_db, config.modulation_order, config.fft_size, config.cp_len,
        channel.account_cp_overhead,
    )
    bits_sent = bit_errors = zf_clamps = 0
    while True:
        remaining = max_bits - bits_sent
        n_bits = max(b, (min(config.bit_budget, remaining) // b) * b)
        tx_bits = draw_bits(stream, n_bits)
        errors, clamps = _run_chain_once(
            tx_bits, config, channel, sigma2, stream, use_equalizer
        )
        bits_sent += n_bits
        bit_errors += errors
        zf_clamps += clamps
        if bit_errors >= target_errors or bits_sent >= max_bits:
            break
    summary = channel.summary() + ("" if use_equalizer else "/noeq")
    return make_record(
        config, summary, ebno_db, bits_sent, bit_errors, zf_clamps, seed, cell_id,
        equalizer="zf" if use_equalizer else "none",
    )


def run_raw_modem(
    order: int,
    ebno_db: float,
    n_bits: int,
    seed: int,
    cell_id: int = 0,
    noise_scale: float = 1.0,
    chunk_bits: int = 3_000_000,
) -> tuple[int, int]:
    """Plain M-PSK over AWGN -- no OFDM framing.

    The reference measurement for checking that the OFDM chain is
    BER-neutral.  Returns (bit errors, bits actually sent); ``n_bits`` is
    floored to a whole number of symbols.
    """
    stream = make_stream(seed, cell_id)
    b = order.bit_length() - 1
    sigma2 = noise_scale * ebno_to_noise_variance(ebno_db, order, 1, 0, False)
    total = (n_bits // b) * b
    errors = 0
    sent = 0
    while sent < total:
        n = min((chunk_bits // b) * b, total - sent)
        bits = draw_bits(stream, n)
        symbols = map_psk(bits, order)
        noisy = symbols + complex_gaussian(stream, symbols.size, sigma2)
        errors += count_bit_errors(bits, demap_psk(noisy, order))[0]
        sent += n
    return errors, total


def _cell_task(
    args: tuple[OfdmConfig, ChannelSpec, int, int, int, int, bool],
) -> BerRecord:
    config, spec, seed, cell_id, target_errors, max_bits, use_equalizer = args
    return run_cell(
        config, spec, spec.ebno_db, seed, cell_id,
        target_errors=target_errors, max_bits=max_bits, use_equalizer=use_equalizer,
    )


def resolve_workers(workers: Optional[int] = None) -> int:
    """Worker count: the OFDMSIM_WORKERS env var overrides everything."""
    env = os.environ.get("OFDMSIM_WORKERS")
    if env:
        return max(1, int(env))
    return max(1, workers or 1)


def run_grid(grid: SweepGrid, workers: Optional[int] = None) -> list[BerRecord]:
    """Run every cell of the grid; output is sorted by cell_id.

    Cells are independent; with ``workers > 1`` they run on a process pool.
    Worker count never changes any record.  If cells fail, the completed
    records are kept on the raised :class:`SweepFailure`.
    """
    tasks = [
        (config, spec, grid.master_seed, cell_id,
         grid.target_errors, grid.max_bits_per_cell, grid.use_equalizer)
        for cell_id, config, spec in grid.cells()
    ]
    n_workers = resolve_workers(workers)
    records: list[BerRecord] = []
    failures: list[tuple[int, str]] = []
    if n_workers == 1:
        for task in tasks:
            try:
                records.append(_cell_task(task))
            except Exception as exc:  # any cell failure; completed cells are kept
                failures.append((task[3], str(exc)))
    else:
        with ProcessPoolExecutor(max_workers=n_workers) as pool:
            futures = [(task[3], pool.submit(_cell_task, task)) for task in tasks]
            for cell_id, future in futures:
                try:
                    records.append(future.result())
                except Exception as exc:  # any cell failure; completed cells are kept
                    failures.append((cell_id, str(exc)))
    records.sort(key=lambda r: r.cell_id)
    if failures:
        raise SweepFailure(failures, records)
    return records


def _as_row(record: Any) -> dict[str, Any]:
    return record.row() if hasattr(record, "row") else dict(record)


_INT_COLUMNS = ("fft_size", "bits_sent", "bit_errors", "zf_clamps", "seed", "cell_id")
_FLOAT_COLUMNS = ("ebno_db", "ber", "ci_low", "ci_high")


def _format_cell(column: str, value: Any) -> str:
    if column in _FLOAT_COLUMNS:
        return f"{float(value):.17g}"
    return str(value)


def write_records(records: Iterable[Any], path: str, fmt: str = "csv") -> None:
    """Persist records as CSV or JSON with the fixed column schema.

    Floats carry 17 significant digits, so a write/read round trip is
    value-exact; cp_fraction is always the rational string (e.g. "1/4").
    """
    rows = [_as_row(r) for r in records]
    if fmt not in ("csv", "json"):
        raise ValueError(f"format must be 'csv' or 'json', got {fmt!r}")
    try:
        if fmt == "csv":
            with open(path, "w", newline="", encoding="utf-8") as fh:
                writer = csv.writer(fh)
                writer.writerow(CSV_COLUMNS)
                for row in rows:
                    writer.writerow([_format_cell(c, row[c]) for c in CSV_COLUMNS])
        else:
            typed = [
                {c: float(f"{row[c]:.17g}") if c in _FLOAT_COLUMNS else row[c]
                 for c in CSV_COLUMNS}
                for row in rows
            ]
            with open(path, "w", encoding="utf-8") as fh:
                json.dump(typed, fh, indent=2)
                fh.write("\n")
    except OSError as exc:
        raise IoError(f"failed to write records to {path}: {exc}") from exc


def read_records(path: str, fmt: Optional[str] = None) -> list[dict[str, Any]]:
    """Read records back as typed row dicts (inverse of write_records)."""
    if fmt is None:
        fmt = "json" if str(path).endswith(".json") else "csv"
    try:
        if fmt == "csv":
            with open(path, newline="", encoding="utf-8") as fh:
                raw_rows = list(csv.DictReader(fh))
        else:
            with open(path, encoding="utf-8") as fh:
                raw_rows = json.load(fh)
    except OSError as exc:
        raise IoError(f"failed to read records from {path}: {exc}") from exc
    rows = []
    for raw in raw_rows:
        row: dict[str, Any] = {}
        for column in CSV_COLUMNS:
            value = raw[column]
            if column in _INT_COLUMNS:
                row[column] = int(value)
            elif column in _FLOAT_COLUMNS:
                row[column] = float(value)
            else:
                row[column] = str(value)
        rows.append(row)
    return rows
