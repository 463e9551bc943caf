#pragma once

// Umbrella header for the monomer-dimer expansion toolkit: exact bivariate
// series, the amplitude fixed-point recursion, pressure assembly, the
// contraction certificate, and the exact enumeration oracle.

#include "mdexp/biseries.hpp"
#include "mdexp/certify.hpp"
#include "mdexp/errors.hpp"
#include "mdexp/fixpoint.hpp"
#include "mdexp/kernel_solve.hpp"
#include "mdexp/kernels.hpp"
#include "mdexp/lambda.hpp"
#include "mdexp/lattice.hpp"
#include "mdexp/rational.hpp"
#include "mdexp/serialize.hpp"
