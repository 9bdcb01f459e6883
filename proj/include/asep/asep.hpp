#pragma once

#include "params.hpp"
#include "algebra.hpp"
#include "qcomb.hpp"
#include "quadrature.hpp"
#include "series.hpp"
#include "window.hpp"
#include "table.hpp"
#include "dist.hpp"
#include "oracle.hpp"
#include "sim.hpp"
#include "stats.hpp"
