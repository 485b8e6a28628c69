#pragma once

#include "daekit/core.hpp"
#include "daekit/errors.hpp"
#include "daekit/indices.hpp"
#include "daekit/models.hpp"
#include "daekit/phdae.hpp"
#include "daekit/quadrature.hpp"
#include "daekit/solver.hpp"
#include "daekit/weierstrass.hpp"
