#pragma once

#include "atm/convergence.hpp"
#include "atm/errors.hpp"
#include "atm/integrator.hpp"
#include "atm/matrix.hpp"
#include "atm/problems.hpp"
#include "atm/rational.hpp"
#include "atm/stability.hpp"
#include "atm/stencil.hpp"
#include "atm/tableau.hpp"
