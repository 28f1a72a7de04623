import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from preproj.field import GF, QQ

FIELDS = {"gf2": GF(2), "gf3": GF(3), "rat": QQ}


@pytest.fixture(params=list(FIELDS))
def field(request):
    return FIELDS[request.param]

