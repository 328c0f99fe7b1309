"""Exception types shared across the simulator."""


class EmptyRegion(ValueError):
    """A region needed for an integral or centroid has no area."""


class ZeroMass(ValueError):
    """The density integrates to (numerically) zero over a region."""


class DuplicatePosition(ValueError):
    """Two agents occupy the same point, so no bisector separates them."""

    def __init__(self, i, j, distance):
        super().__init__(f"agents {i} and {j} coincide (distance {distance:.3g} m)")
        self.pair = (i, j)
        self.distance = distance


class DisconnectedGraph(RuntimeError):
    """The r-disk communication graph does not span every agent.

    ``components`` lists the node indices reachable from agent 0 first,
    then the remaining nodes.  ``step`` is filled in by the engine when the
    failure happens inside a run.
    """

    def __init__(self, components, step=None):
        self.components = [sorted(c) for c in components]
        self.step = step
        super().__init__(self._message())

    def _message(self):
        where = f" at step {self.step}" if self.step is not None else ""
        parts = " | ".join(str(c) for c in self.components)
        return f"communication graph is disconnected{where}: {parts}"

    def __str__(self):
        return self._message()


class NonConvergence(RuntimeError):
    """The unicycle controller did not reach its goal within the micro-step budget."""

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class ConfigError(Exception):
    """Base class for scenario/sweep file problems."""


class ParseError(ConfigError):
    pass


class ValidationError(ConfigError):
    """Carries every violated invariant, each prefixed by its field path."""

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("invalid configuration:\n  " + "\n  ".join(self.problems))
