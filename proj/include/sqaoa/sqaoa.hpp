#pragma once

#include "sqaoa/alignment.hpp"
#include "sqaoa/error.hpp"
#include "sqaoa/graph.hpp"
#include "sqaoa/heuristics.hpp"
#include "sqaoa/optimizer.hpp"
#include "sqaoa/rng.hpp"
#include "sqaoa/simulator.hpp"
#include "sqaoa/sparsifiers.hpp"
#include "sqaoa/version.hpp"
