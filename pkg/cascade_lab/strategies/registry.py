"""
Strategy registry.

One place that knows every seed-selection strategy, its hyper-parameters
and how to call it, so the sweep and the CLI select strategies by name.
Every selection goes through `select`, which records the call and its
result in the run ledger.
"""

import time
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Union

from ..audit import NullLedger, RunAction, RunLedger
from ..cascade import CascadeParams
from ..errors import ParameterError
from ..graph import Graph
from .base import DEFAULT_MASS, DEFAULT_TRIALS_PER_EVAL, SeedSelection, StrategyName
from .hill_climb import select_hill_climb
from .local import select_local
from .random_choice import select_random


@dataclass
class Strategy:
    """
    A registered seed-selection strategy.

    Attributes:
        name: Unique identifier
        description: What the strategy does
        parameters: Accepted hyper-parameters and their defaults
        selector: Callable (g, k, params, rng_seed, **hyper) -> SeedSelection
    """
    name: StrategyName
    description: str
    parameters: Dict[str, Any]
    selector: Callable[..., SeedSelection]


class StrategyRegistry:
    """
    Registry of seed-selection strategies.

    Usage:
        registry = StrategyRegistry(ledger)
        selection = registry.select("local", g, k=3, params=params, rng_seed=7, M=100)
    """

    def __init__(self, ledger: Optional[Union[RunLedger, NullLedger]] = None, workers: Optional[int] = 1):
        self.ledger = ledger or NullLedger()
        self.workers = workers
        self._strategies: Dict[StrategyName, Strategy] = {}
        self._register_builtin_strategies()

    def _register_builtin_strategies(self) -> None:
        self.register(Strategy(
            name=StrategyName.RANDOM,
            description="k distinct nodes drawn uniformly at random",
            parameters={},
            selector=lambda g, k, params, rng_seed: select_random(g, k, rng_seed),
        ))
        self.register(Strategy(
            name=StrategyName.HILL_CLIMB,
            description="Greedy hill-climbing on Monte-Carlo mean influence",
            parameters={"trials_per_eval": DEFAULT_TRIALS_PER_EVAL},
            selector=lambda g, k, params, rng_seed, trials_per_eval=DEFAULT_TRIALS_PER_EVAL: select_hill_climb(
                g, k, params, trials_per_eval=trials_per_eval, rng_seed=rng_seed, workers=self.workers
            ),
        ))
        self.register(Strategy(
            name=StrategyName.LOCAL,
            description="Best node of k bounded sub-networks grown around random roots",
            parameters={"M": DEFAULT_MASS, "trials_per_eval": DEFAULT_TRIALS_PER_EVAL},
            selector=lambda g, k, params, rng_seed, M=DEFAULT_MASS, trials_per_eval=DEFAULT_TRIALS_PER_EVAL: select_local(
                g, k, mass=M, params=params, trials_per_eval=trials_per_eval, rng_seed=rng_seed
            ),
        ))

    def register(self, strategy: Strategy) -> None:
        self._strategies[strategy.name] = strategy

    def get(self, name: Union[str, StrategyName]) -> Strategy:
        try:
            return self._strategies[StrategyName(name)]
        except (KeyError, ValueError):
            raise ParameterError(
                f"unknown strategy {name!r}; known: {', '.join(s.value for s in self._strategies)}"
            ) from None

    def list_strategies(self) -> List[Strategy]:
        return list(self._strategies.values())

    def select(
        self,
        name: Union[str, StrategyName],
        g: Graph,
        k: int,
        params: CascadeParams,
        rng_seed: int,
        label: Optional[str] = None,
        **hyper: Any
    ) -> SeedSelection:
        """
        Run one strategy, recording the call and its outcome.

        Hyper-parameters not declared by the strategy are rejected; a
        value of None falls back to the strategy's default.

        Raises:
            ParameterError: Unknown strategy or hyper-parameter
        """
        strategy = self.get(name)
        unknown = set(hyper) - set(strategy.parameters)
        if unknown:
            raise ParameterError(
                f"strategy {strategy.name.value} does not take {', '.join(sorted(unknown))}"
            )
        hyper = {key: value for key, value in hyper.items() if value is not None}
        component = label or strategy.name.value

        self.ledger.log(
            action=RunAction.STRATEGY_INVOKED,
            component=component,
            payload_in={"strategy": strategy.name.value, "k": k, "p": params.p, "rng_seed": rng_seed, **hyper},
        )

        start = time.time()
        try:
            selection = strategy.selector(g, k, params, rng_seed, **hyper)
        except Exception as e:
            self.ledger.log(
                action=RunAction.STRATEGY_RESULT,
                component=component,
                duration_ms=int((time.time() - start) * 1000),
                success=False,
                error_message=str(e),
            )
            raise

        self.ledger.log(
            action=RunAction.STRATEGY_RESULT,
            component=component,
            payload_out={"seeds": list(selection.seeds), "cost_steps": selection.cost_steps},
            duration_ms=int((time.time() - start) * 1000),
        )
        return selection
