#pragma once

#include "grid.hpp"
#include "step_function.hpp"
#include "haar.hpp"
#include "weight.hpp"
#include "weight_family.hpp"
#include "carleson.hpp"
#include "stopping.hpp"
#include "operators.hpp"
#include "norm.hpp"
#include "diagnostics.hpp"
#include "io.hpp"
