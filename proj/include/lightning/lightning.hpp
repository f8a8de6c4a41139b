#pragma once

#include "lightning/builder.hpp"
#include "lightning/chebyshev.hpp"
#include "lightning/error.hpp"
#include "lightning/evaluator.hpp"
#include "lightning/experiments.hpp"
#include "lightning/mpnum.hpp"
#include "lightning/oracle.hpp"
#include "lightning/poles.hpp"
#include "lightning/scheme.hpp"
#include "lightning/serialize.hpp"
#include "lightning/theory.hpp"
