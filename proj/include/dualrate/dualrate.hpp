#pragma once

#include "dualrate/benchmark.hpp"
#include "dualrate/dynamics.hpp"
#include "dualrate/errors.hpp"
#include "dualrate/graph.hpp"
#include "dualrate/io.hpp"
#include "dualrate/jacobi.hpp"
#include "dualrate/lifted.hpp"
#include "dualrate/optimize.hpp"
#include "dualrate/polynomial.hpp"
#include "dualrate/spectral.hpp"
