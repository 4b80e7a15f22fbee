#pragma once

#include "flatland/errors.hpp"
#include "flatland/estimators.hpp"
#include "flatland/inference.hpp"
#include "flatland/measure.hpp"
#include "flatland/paradox.hpp"
#include "flatland/random.hpp"
#include "flatland/rational.hpp"
#include "flatland/simulation.hpp"
#include "flatland/word.hpp"
