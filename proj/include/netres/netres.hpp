#pragma once

#include "netres/analytic.hpp"
#include "netres/beats.hpp"
#include "netres/example_graphs.hpp"
#include "netres/flaming.hpp"
#include "netres/graph.hpp"
#include "netres/simulate.hpp"
#include "netres/spectrum.hpp"
#include "netres/symmetrize.hpp"
#include "netres/types.hpp"
