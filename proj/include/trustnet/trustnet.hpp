#pragma once

// Umbrella header for the trustnet library: rig-valued trust networks,
// path/endorsement completion, the stochastic trust-building process and
// its analytic steady state, spectral trust communities, and percolation
// robustness experiments.

#include "trustnet/completion.hpp"
#include "trustnet/dynamics.hpp"
#include "trustnet/errors.hpp"
#include "trustnet/fit.hpp"
#include "trustnet/io.hpp"
#include "trustnet/matrix.hpp"
#include "trustnet/network.hpp"
#include "trustnet/percolation.hpp"
#include "trustnet/rig.hpp"
#include "trustnet/rng.hpp"
#include "trustnet/schedule.hpp"
#include "trustnet/specfun.hpp"
#include "trustnet/spectral.hpp"
#include "trustnet/steady_state.hpp"
