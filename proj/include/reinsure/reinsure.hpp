#pragma once

#include "claims.hpp"
#include "commands.hpp"
#include "config.hpp"
#include "csv.hpp"
#include "errors.hpp"
#include "filter.hpp"
#include "model.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"
#include "random.hpp"
#include "roots.hpp"
#include "setup.hpp"
#include "simulate.hpp"
#include "strategy.hpp"
