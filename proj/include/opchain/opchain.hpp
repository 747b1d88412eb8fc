#pragma once

/**
 * @file opchain.hpp
 * @brief Umbrella header for the opchain library.
 */

#include "errors.hpp"
#include "numtower.hpp"
#include "chain.hpp"
#include "joinalg.hpp"
#include "expr.hpp"
#include "symbolic.hpp"
#include "eval.hpp"
#include "calculus.hpp"
