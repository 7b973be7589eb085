import numpy as np
import pytest

_ACCEPTANCE: dict[str, tuple[bool, str]] = {}


def central_difference(f, x: np.ndarray, h: float = 1e-4) -> np.ndarray:
    """Gradient of scalar ``f`` at ``x`` by central differences."""
    x = np.array(x, dtype=float)
    g = np.empty_like(x)
    for i in np.ndindex(x.shape):
        old = x[i]
        x[i] = old + h
        up = f(x)
        x[i] = old - h
        down = f(x)
        x[i] = old
        g[i] = (up - down) / (2 * h)
    return g


def rel_error(a: np.ndarray, b: np.ndarray, floor: float = 1e-8) -> float:
    a = np.ravel(a)
    b = np.ravel(b)
    return float(np.linalg.norm(a - b) / max(np.linalg.norm(a), np.linalg.norm(b), floor))


def relu_margin(net, X) -> float:
    """Distance of the closest ReLU pre-activation to the kink at zero."""
    from belreg.toytrain import forward

    _, (_, pre) = forward(net, X)
    return min(float(np.abs(z).min()) for z, act in zip(pre, net.relu) if act)


def param_fd(net, f, h: float = 1e-4) -> list[np.ndarray]:
    """Central differences of ``f()`` with respect to every array in ``net.params``."""
    grads = []
    for p in net.params:
        g = np.empty_like(p)
        for i in np.ndindex(p.shape):
            old = p[i]
            p[i] = old + h
            up = f()
            p[i] = old - h
            down = f()
            p[i] = old
            g[i] = (up - down) / (2 * h)
        grads.append(g)
    return grads


def mlp_instance(rng: np.random.Generator, bits: int | None, outputs: int = 1, margin: float = 1e-3):
    """Small network plus a 2-sample batch with every ReLU input at least ``margin`` from 0.

    ``bits=None`` builds the direct head. Biases are drawn non-zero so that a
    dead layer cannot pin later pre-activations exactly at the kink.
    """
    from belreg.toytrain import bel_net, direct_net

    while True:
        if bits is None:
            net = direct_net(3, (5, 4), outputs, rng=rng)
        else:
            net = bel_net(3, (5, 4), 3, bits, outputs, rng=rng)
        for b in net.biases:
            b[:] = rng.normal(0.0, 0.1, b.shape)
        X = rng.random((2, 3))
        if relu_margin(net, X) > margin:
            return net, X


@pytest.fixture
def acceptance():
    """Record one criterion verdict; a summary line per criterion prints at the end."""

    def record(name: str, passed: bool, detail: str = "") -> None:
        _ACCEPTANCE[name] = (bool(passed), detail)

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE, key=lambda s: int(s.split()[0].lstrip("AC"))):
        passed, detail = _ACCEPTANCE[name]
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {name}  {detail}")
