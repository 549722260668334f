#pragma once

#include "speclab/arithmetic.hpp"
#include "speclab/cli.hpp"
#include "speclab/joining.hpp"
#include "speclab/model_spec.hpp"
#include "speclab/models.hpp"
#include "speclab/numeric.hpp"
#include "speclab/permutation.hpp"
#include "speclab/report.hpp"
#include "speclab/spectral.hpp"
