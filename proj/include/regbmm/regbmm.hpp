#pragma once

#include "bench.hpp"
#include "bitmatrix.hpp"
#include "decompose.hpp"
#include "enumerate.hpp"
#include "gridnorm.hpp"
#include "io.hpp"
#include "random.hpp"
#include "rational.hpp"
#include "sampler.hpp"
#include "sift.hpp"
#include "threesum.hpp"
#include "triangle.hpp"
