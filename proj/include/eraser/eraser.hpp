#pragma once

#include "eraser/core.hpp"
#include "eraser/random.hpp"
#include "eraser/ensemble.hpp"
#include "eraser/optics.hpp"
#include "eraser/parallel.hpp"
#include "eraser/correlator.hpp"
#include "eraser/oracle.hpp"
#include "eraser/analysis.hpp"
