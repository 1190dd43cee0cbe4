import numpy as np
import pytest

import pipenet as pn
from pipenet import steady_state

LOOP_TEXT = """\
gas Rs=518.28 z0=0.95 T0=300

pipe P1 L=10 d=0.7 eps=4.57e-5 Re=1.168e8
pipe P2 L=10 d=0.7 eps=4.57e-5 Re=1.168e8
pipe P3 L=10 d=0.7 eps=4.57e-5 Re=1.168e8
joint J feeds=[P1,P2] into=P3
gain C k=4
pipe P4 L=10 d=0.7 eps=4.57e-5 Re=1.168e8
gain V k=0.8
pipe P5 L=10 d=0.7 eps=4.57e-5 Re=1.168e8
pipe P6 L=10 d=0.7 eps=4.57e-5 Re=1.168e8
pipe P7 L=10 d=0.7 eps=4.57e-5 Re=1.168e8
branch B1 from=P5 into=[P6,P7]
pipe P8 L=10 d=0.7 eps=4.57e-5 Re=1.168e8
pipe P9 L=10 d=0.7 eps=4.57e-5 Re=1.168e8
pipe P10 L=10 d=0.7 eps=4.57e-5 Re=1.168e8
branch B2 from=P8 into=[P9,P10]

nominal * pl=25e5 q=21

link J.r C.l
link C.r P4.l
link P4.r V.l
link V.r B1.l
link B1.r2 B2.l
link B2.r2 J.l2

input fill = J.l1
input dist = B1.r1
input vent = B2.r1
"""


@pytest.fixture(scope="session")
def gas():
    return pn.GasProperties(R_s=518.28, z_0=0.95, c_v=1700.0,
                            T_0=300.0, T_amb=300.0)


@pytest.fixture(scope="session")
def ref_lambda():
    return pn.haaland_lambda(4.57e-5, 0.7, 1.168e8)


@pytest.fixture(scope="session")
def pipe_params(ref_lambda):
    return pn.PipeParams(L=10.0, d=0.7, lam=ref_lambda)


@pytest.fixture(scope="session")
def op(pipe_params, gas):
    return steady_state.isothermal_nominal(25e5, 21.0, gas.T_0, pipe_params, gas)


@pytest.fixture(scope="session")
def loop_spec():
    return pn.parse(LOOP_TEXT)


@pytest.fixture(scope="session")
def loop_model(loop_spec):
    return pn.build_closed(loop_spec)


def random_pipe(rng, gas):
    """Random but physically sane pipe and operating point."""
    params = pn.PipeParams(L=float(rng.uniform(5.0, 2000.0)),
                           d=float(rng.uniform(0.1, 1.0)),
                           lam=float(rng.uniform(0.005, 0.03)))
    p_l = float(rng.uniform(5e5, 80e5))
    q = float(rng.uniform(0.5, 30.0) * params.d**2)
    op_ = steady_state.isothermal_nominal(p_l, q, gas.T_0, params, gas)
    return params, op_
