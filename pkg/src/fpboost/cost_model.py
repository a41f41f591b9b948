"""First-order clock-cycle model of the training datapath.

Streaming passes process one sample per clock per engine; node training
adds a serial ordered-bin gain sweep with all features scored in parallel.
The constants are parameters so the model can be re-calibrated; out of the
box it is an order-of-magnitude estimator, not a cycle-accurate one.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class CostParams:
    clock_hz: float = 100e6
    pipeline_latency_cycles: int = 16       # fill/drain per streaming pass
    gain_scan_cycles: int = 256             # per node: one sweep over ordered bins
    per_tree_overhead_cycles: int = 64      # init/handshake per boosting round

    def __post_init__(self):
        if min(self.clock_hz, self.pipeline_latency_cycles,
               self.gain_scan_cycles, self.per_tree_overhead_cycles) <= 0:
            raise ValueError("all cost parameters must be positive")


@dataclass(frozen=True)
class CostReport:
    histogram_cycles: int
    split_cycles: int
    update_cycles: int
    scan_cycles: int
    overhead_cycles: int
    total_cycles: int
    wall_seconds: float


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def to_wall_time(cycles: int, clock_hz: float) -> float:
    if clock_hz <= 0:
        raise ValueError("clock_hz must be positive")
    return cycles / clock_hz


def estimate(log, n_samples: int, config, params: CostParams = CostParams(),
             n_validation: int = 0) -> CostReport:
    """Cycle estimate for a finished training run.

    log is the per-tree training log: each tree carries per-depth lists of
    node sample counts for the histogram pass and for the partition pass.
    Scoring n_validation extra samples per tree is off by default.
    """
    engines = config.n_engines
    lat = params.pipeline_latency_cycles
    hist_cycles = 0
    split_cycles = 0
    scan_cycles = 0
    update_cycles = 0
    for tree in log.trees:
        for depth in tree.depths:
            hist_cycles += sum(_ceil_div(s, engines) for s in depth.trained_sizes) + lat
            if depth.split_sizes:
                split_cycles += sum(_ceil_div(s, engines) for s in depth.split_sizes) + lat
            scan_cycles += params.gain_scan_cycles * len(depth.trained_sizes)
        update_cycles += _ceil_div(n_samples, engines) + lat
        if n_validation:
            update_cycles += _ceil_div(n_validation, engines)
    overhead_cycles = params.per_tree_overhead_cycles * len(log.trees)
    total = hist_cycles + split_cycles + update_cycles + scan_cycles + overhead_cycles
    return CostReport(
        histogram_cycles=hist_cycles,
        split_cycles=split_cycles,
        update_cycles=update_cycles,
        scan_cycles=scan_cycles,
        overhead_cycles=overhead_cycles,
        total_cycles=total,
        wall_seconds=to_wall_time(total, params.clock_hz),
    )


def format_text(report: CostReport) -> str:
    rows = [
        ("histogram passes", report.histogram_cycles),
        ("partition passes", report.split_cycles),
        ("gain scans", report.scan_cycles),
        ("score updates", report.update_cycles),
        ("per-tree overhead", report.overhead_cycles),
        ("total", report.total_cycles),
    ]
    width = max(len(name) for name, _ in rows)
    lines = [f"{name:<{width}}  {cycles:>14,} cycles" for name, cycles in rows]
    lines.append(f"{'wall time':<{width}}  {report.wall_seconds * 1e3:>14.6f} ms")
    return "\n".join(lines)


def format_keyvalue(report: CostReport) -> str:
    pairs = [
        ("histogram_cycles", report.histogram_cycles),
        ("split_cycles", report.split_cycles),
        ("scan_cycles", report.scan_cycles),
        ("update_cycles", report.update_cycles),
        ("overhead_cycles", report.overhead_cycles),
        ("total_cycles", report.total_cycles),
        ("wall_seconds", repr(report.wall_seconds)),
    ]
    return "\n".join(f"{k}={v}" for k, v in pairs) + "\n"
