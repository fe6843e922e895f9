#pragma once

#include "ergo/common.hpp"
#include "ergo/set_algebra.hpp"
#include "ergo/state_space.hpp"
#include "ergo/partitions.hpp"
#include "ergo/chains.hpp"
#include "ergo/visit_analysis.hpp"
#include "ergo/inverse_limit.hpp"
