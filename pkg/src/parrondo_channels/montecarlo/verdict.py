import attrs

from ..exceptions import InsufficientSamplesError, ParameterError
from .stats import AggregateStats


@attrs.frozen
class DriftEstimate:
    kind: str
    estimate: float
    stderr: float

    def below(self, sigmas: float) -> bool:
        return self.estimate + sigmas * self.stderr < 0.0

    def above(self, sigmas: float) -> bool:
        return self.estimate - sigmas * self.stderr > 0.0


@attrs.frozen
class ParrondoVerdict:
    """Losing-losing-winning verdict from the empirical drifts of A, B and C."""

    drift_a: DriftEstimate
    drift_b: DriftEstimate
    drift_c: DriftEstimate
    individually_useless: bool
    jointly_winning: bool
    sigmas: float = 3.0

    @property
    def paradox(self) -> bool:
        return self.individually_useless and self.jointly_winning

    def to_dict(self) -> dict:
        d = attrs.asdict(self)
        d["paradox"] = self.paradox
        return d


def parrondo_verdict(
    stats_a: AggregateStats,
    stats_b: AggregateStats,
    stats_c: AggregateStats,
    sigmas: float = 3.0,
) -> ParrondoVerdict:
    """A must not drift up, B must drift down and C up, each judged at `sigmas` standard errors.

    The three ensembles have to share their number of uses and trials.
    """
    ensembles = (stats_a, stats_b, stats_c)
    if len({(s.uses, s.trials) for s in ensembles}) != 1:
        raise ParameterError(
            "Ensembles must share uses and trials, got "
            + ", ".join(f"{s.spec.kind.value}: n={s.uses}, N={s.trials}" for s in ensembles)
        )
    if stats_a.uses == 0:
        raise InsufficientSamplesError("Cannot judge drift from zero channel uses.")

    a, b, c = (
        DriftEstimate(s.spec.kind.value, s.empirical_drift_per_step, s.drift_stderr) for s in ensembles
    )
    return ParrondoVerdict(
        drift_a=a,
        drift_b=b,
        drift_c=c,
        individually_useless=not a.above(sigmas) and b.below(sigmas),
        jointly_winning=c.above(sigmas),
        sigmas=sigmas,
    )
