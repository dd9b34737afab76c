#pragma once

// Umbrella header.

#include "pcanml/baselines.hpp"
#include "pcanml/complexity.hpp"
#include "pcanml/datasets.hpp"
#include "pcanml/errors.hpp"
#include "pcanml/grid_step.hpp"
#include "pcanml/matrix.hpp"
#include "pcanml/quantization.hpp"
#include "pcanml/random.hpp"
#include "pcanml/report.hpp"
#include "pcanml/svd.hpp"
