#pragma once

#include "mlsb/mp_real.hpp"
#include "mlsb/errors.hpp"
#include "mlsb/linalg.hpp"
#include "mlsb/quadrature.hpp"
#include "mlsb/geometry.hpp"
#include "mlsb/table_io.hpp"
#include "mlsb/symbolic.hpp"
#include "mlsb/dynamics.hpp"
#include "mlsb/solver.hpp"
#include "mlsb/spectrum.hpp"
#include "mlsb/inverse.hpp"
#include "mlsb/svg.hpp"
#include "mlsb/report.hpp"
