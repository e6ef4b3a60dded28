#pragma once

#include "bellshape/amcm.hpp"
#include "bellshape/errors.hpp"
#include "bellshape/exactdiff.hpp"
#include "bellshape/factor.hpp"
#include "bellshape/io.hpp"
#include "bellshape/parallel.hpp"
#include "bellshape/pff.hpp"
#include "bellshape/phi.hpp"
#include "bellshape/post.hpp"
#include "bellshape/quadrature.hpp"
#include "bellshape/transform.hpp"
#include "bellshape/whale.hpp"
#include "bellshape/zeromeasure.hpp"
