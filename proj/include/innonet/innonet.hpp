#pragma once

#include "innonet/core/combinatorics.hpp"
#include "innonet/core/errors.hpp"
#include "innonet/core/idea_set.hpp"
#include "innonet/core/parallel.hpp"
#include "innonet/core/rng.hpp"
#include "innonet/model/cost.hpp"
#include "innonet/model/types.hpp"
#include "innonet/sim/closure.hpp"
#include "innonet/sim/counting.hpp"
#include "innonet/sim/giant.hpp"
#include "innonet/sim/monte_carlo.hpp"
#include "innonet/sim/network.hpp"
#include "innonet/sim/payoff.hpp"
#include "innonet/sim/replay.hpp"
#include "innonet/sim/tau.hpp"
#include "innonet/analytics/asymptotics.hpp"
#include "innonet/analytics/branching.hpp"
#include "innonet/analytics/investment.hpp"
#include "innonet/analytics/spectral.hpp"
#include "innonet/equilibrium/best_response.hpp"
#include "innonet/equilibrium/deviation.hpp"
#include "innonet/equilibrium/intervention.hpp"
#include "innonet/equilibrium/result.hpp"
#include "innonet/equilibrium/solver.hpp"
#include "innonet/expcli/claims.hpp"
#include "innonet/expcli/experiments.hpp"
#include "innonet/expcli/manifest.hpp"
#include "innonet/oracle/brute_force.hpp"
