#pragma once

#include "odekit/algebra.hpp"
#include "odekit/butcher_tableau.hpp"
#include "odekit/controlled_error_stepper.hpp"
#include "odekit/convergence.hpp"
#include "odekit/dense_output_dopri5.hpp"
#include "odekit/errors.hpp"
#include "odekit/explicit_error_dopri5.hpp"
#include "odekit/explicit_error_rk54_ck.hpp"
#include "odekit/explicit_euler.hpp"
#include "odekit/explicit_rk4.hpp"
#include "odekit/implicit_euler.hpp"
#include "odekit/integrate.hpp"
#include "odekit/linalg.hpp"
#include "odekit/stepper_categories.hpp"
#include "odekit/symplectic_euler.hpp"
#include "odekit/systems.hpp"
