from typing import Dict, List, Literal, Optional

import math

from ckspace.config import Config, _require, option


class EventLogConfig(Config):
    """
    Configures sessionization of event logs.

    |parameters|
    """

    # fmt: off
    session_gap_ms = option(int, 30 * 60 * 1000, "The inter-event gap, in milliseconds, that starts a new session.")
    # fmt: on

    def validate(self):
        _require(self.session_gap_ms >= 0, "events.session_gap_ms must be non-negative")


class ControllerConfig(Config):
    """
    Configures skill navigation.

    |parameters|
    """

    # fmt: off
    forward = option(float, 0.85, "The belief at or above which the controller moves to a successor.")
    backward = option(float, 0.30, "The belief below which the controller moves to a precursor.")
    # fmt: on

    def validate(self):
        _require(
            0.0 <= self.backward < self.forward <= 1.0,
            "controller thresholds must satisfy 0 <= backward < forward <= 1",
        )


class StopPolicyConfig(Config):
    """
    Configures the when-to-stop policy.

    |parameters|
    """

    # fmt: off
    mastery      = option(float, 0.95,  "The predicted-correct probability that counts toward mastery.")
    consecutive  = option(int,   3,     "The number of consecutive values at or above the mastery threshold.")
    min_attempts = option(int,   10,    "The number of attempts before wheel-spinning can be flagged.")
    window       = option(int,   8,     "The number of trailing values the slope is fitted over.")
    slope_floor  = option(float, 0.005, "The slope below which progress counts as stalled.")
    ceiling      = option(float, 0.6,   "The value the last prediction must stay below to flag wheel-spinning.")
    # fmt: on

    def validate(self):
        _require(
            0.0 < self.ceiling < self.mastery <= 1.0,
            "stop_policy thresholds must satisfy 0 < ceiling < mastery <= 1",
        )
        _require(self.consecutive >= 1, "stop_policy.consecutive must be at least 1")
        _require(self.window >= 2, "stop_policy.window must be at least 2")
        _require(self.min_attempts >= 1, "stop_policy.min_attempts must be at least 1")
        _require(not math.isnan(self.slope_floor), "stop_policy.slope_floor must be a number")


class KnowledgeConfig(Config):
    """
    Configures the knowledge model defaults and parameter fitting.

    |parameters|
    """

    # fmt: off
    slip      = option(float, 0.1,   "The default slip probability.")
    guess     = option(float, 0.25,  "The default guess probability.")
    learn     = option(float, 0.1,   "The default learn probability.")
    forget    = option(float, 0.01,  "The default forget probability.")
    max_slip  = option(float, 0.3,   "The upper bound of fitted slip probabilities.")
    max_guess = option(float, 0.5,   "The upper bound of fitted guess probabilities.")
    min_rate  = option(float, 0.001, "The lower bound of fitted slip and guess probabilities.")
    fit_forget = option(bool, True,  "Whether fitting estimates forgetting or keeps it at the default.")
    max_iter  = option(int,   200,   "The maximum number of expectation-maximization iterations.")
    tolerance = option(float, 1e-6,  "The relative log-likelihood change that ends fitting.")
    passes    = option(int,   2,     "The number of times the prerequisite gates are re-estimated.")
    # fmt: on

    def validate(self):
        _require(0.0 < self.min_rate < self.max_slip <= 1.0, "knowledge.max_slip out of range")
        _require(0.0 < self.min_rate < self.max_guess <= 1.0, "knowledge.max_guess out of range")
        _require(self.slip + self.guess < 1.0, "knowledge defaults must satisfy slip + guess < 1")

        for name in ("slip", "guess", "learn", "forget"):
            value = getattr(self, name)
            _require(0.0 <= value <= 1.0, f"knowledge.{name} must lie in [0, 1]")

        _require(self.max_iter >= 1, "knowledge.max_iter must be at least 1")
        _require(self.passes >= 1, "knowledge.passes must be at least 1")


class EngagementConfig(Config):
    """
    Configures engagement feature processing and the error repetition
    model.

    |parameters|
    """

    # fmt: off
    slow_alpha  = option(float, 0.05, "The smoothing factor of the slow trend.")
    folds       = option(int,   10,   "The number of cross-validation folds.")
    penalties   = option(int,   20,   "The size of the L1 penalty grid.")
    min_penalty = option(float, 1e-2, "The weakest L1 penalty of the grid.")
    max_penalty = option(float, 1e3,  "The strongest L1 penalty of the grid.")
    hmm_iter    = option(int,   100,  "The maximum number of iterations when fitting the state chains.")
    # fmt: on

    def validate(self):
        _require(0.0 < self.slow_alpha <= 1.0, "engagement.slow_alpha must lie in (0, 1]")
        _require(self.folds >= 2, "engagement.folds must be at least 2")
        _require(self.penalties >= 1, "engagement.penalties must be at least 1")
        _require(
            0.0 < self.min_penalty <= self.max_penalty,
            "engagement penalties must satisfy 0 < min_penalty <= max_penalty",
        )


class TraitsConfig(Config):
    """
    Configures offline clustering of student profiles.

    |parameters|
    """

    # fmt: off
    dimensions = option(int, 3,  "The embedding dimension.")
    k_min      = option(int, 2,  "The smallest number of clusters considered.")
    k_max      = option(int, 8,  "The largest number of clusters considered.")
    restarts   = option(int, 20, "The number of K-Means restarts.")
    # fmt: on

    def validate(self):
        _require(self.dimensions >= 1, "traits.dimensions must be at least 1")
        _require(2 <= self.k_min <= self.k_max, "traits cluster range must satisfy 2 <= k_min <= k_max")
        _require(self.restarts >= 1, "traits.restarts must be at least 1")


class TemporalConfig(Config):
    """
    Configures temporally coherent clustering of session behavior.

    |parameters|
    """

    # fmt: off
    chain      = option(Literal["navigation", "input"], "navigation", "The behavior the chains summarize.")
    smoothing  = option(float,           0.5,  "The additive count added to every transition cell.")
    sigma      = option(Optional[float], None, "The similarity bandwidth. ``None`` uses the median pairwise distance.")
    gamma      = option(Optional[float], None, "A fixed smoothing weight. ``None`` chooses it adaptively.")
    k          = option(int,             3,    "The number of clusters per session.")
    dimensions = option(int,             3,    "The embedding dimension.")
    restarts   = option(int,             10,   "The number of K-Means restarts.")
    # fmt: on

    def validate(self):
        _require(self.smoothing > 0.0, "temporal.smoothing must be positive")
        _require(self.sigma is None or self.sigma > 0.0, "temporal.sigma must be positive")
        _require(self.gamma is None or 0.0 <= self.gamma <= 1.0, "temporal.gamma must lie in [0, 1]")
        _require(self.k >= 1, "temporal.k must be at least 1")


class ScreenerConfig(Config):
    """
    Configures feature selection and adaptive screening.

    |parameters|
    """

    # fmt: off
    epsilon        = option(float,           0.01, "The posterior change below which a feature counts as uninformative.")
    patience       = option(int,             3,    "The number of consecutive uninformative features that end the test.")
    variance_floor = option(float,           1e-6, "The smallest class-conditional variance.")
    merge          = option(float,           0.8,  "The absolute correlation at which features share a group.")
    alpha          = option(Optional[float], None, "The Bonferroni-corrected significance a representative needs. ``None`` keeps every group.")
    # fmt: on

    def validate(self):
        _require(self.epsilon >= 0.0, "screener.epsilon must be non-negative")
        _require(self.patience >= 1, "screener.patience must be at least 1")
        _require(self.variance_floor > 0.0, "screener.variance_floor must be positive")
        _require(0.0 < self.merge <= 1.0, "screener.merge must lie in (0, 1]")
        _require(self.alpha is None or 0.0 < self.alpha <= 1.0, "screener.alpha must lie in (0, 1]")


class SimulationConfig(Config):
    """
    Configures the synthetic population and closed-loop sessions.

    |parameters|
    """

    # fmt: off
    size            = option(int,                  50,         "The number of students.")
    mixture         = option(Dict[str, float],     {"g1": 1 / 6, "g2": 1 / 6, "g3": 1 / 6, "g4": 1 / 6, "g5": 1 / 6, "g6": 1 / 6}, "The subgroup template weights.")
    dd_rate         = option(float,                0.0,        "The probability that a student outside the lowest subgroup has dyscalculia.")
    wheel_spin_rate = option(float,                0.0,        "The probability that a skill never becomes learnable for a student.")
    sessions        = option(int,                  3,          "The number of sessions per student.")
    session_length  = option(int,                  30,         "The number of tasks per session.")
    scenario        = option(Literal["math", "spelling"], "math", "The training program.")
    engagement      = option(bool,                 True,       "Whether engagement states modulate answers.")
    start_skills    = option(List[str],            [],         "The skills training starts on. Empty starts on the first skill of the net.")
    # fmt: on

    def validate(self):
        _require(self.size >= 0, "simulation.size must be non-negative")
        _require(self.sessions >= 1, "simulation.sessions must be at least 1")
        _require(self.session_length >= 1, "simulation.session_length must be at least 1")
        _require(0.0 <= self.dd_rate <= 1.0, "simulation.dd_rate must lie in [0, 1]")
        _require(0.0 <= self.wheel_spin_rate <= 1.0, "simulation.wheel_spin_rate must lie in [0, 1]")
        _require(
            all(w >= 0.0 for w in self.mixture.values()) and abs(sum(self.mixture.values()) - 1.0) < 1e-9,
            "simulation.mixture weights must be non-negative and sum to 1",
        )


blocks = {
    "controller": ControllerConfig,
    "engagement": EngagementConfig,
    "events": EventLogConfig,
    "knowledge": KnowledgeConfig,
    "screener": ScreenerConfig,
    "simulation": SimulationConfig,
    "stop_policy": StopPolicyConfig,
    "temporal": TemporalConfig,
    "traits": TraitsConfig,
}


__all__ = [
    "ControllerConfig",
    "EngagementConfig",
    "EventLogConfig",
    "KnowledgeConfig",
    "ScreenerConfig",
    "SimulationConfig",
    "StopPolicyConfig",
    "TemporalConfig",
    "TraitsConfig",
]
