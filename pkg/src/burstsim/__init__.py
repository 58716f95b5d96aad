"""Traffic-aware SSD burst buffer simulator."""

from .buffer import (NODE_BYTES, FlushPlan, Gate, MetaNode, MetaTree, Region, RegionState,
                     SSDBuffer, append, flush_gate, metadata_footprint, plan_flush)
from .config import Config, default_config
from .detector import StreamStats, analyze, group, random_factor_sum, rf_pair, stream_stats
from .devices import HDD_DEFAULT, SSD_DEFAULT, DeviceProfile, HeadState, service_time, service_window
from .engine import (MODES, Metrics, PipelineParams, PolicyMode, predict_no_pipeline,
                     predict_pipeline, simulate)
from .errors import (BufferExhausted, BurstSimError, ConfigError, RegionFull, RegionStateError,
                     StatsUndefinedError, TraceParseError)
from .redirector import Device, PercentList, Redirector, WaterMarkRedirector, switch, threshold
from .trace import PatternSpec, Request, Trace, concat, generate, load_trace, loads, dumps, mix, save_trace

__version__ = "0.1.0"
