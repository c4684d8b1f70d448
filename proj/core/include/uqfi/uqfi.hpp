#pragma once

// Umbrella header: the whole public interface.

#include "uqfi/csv_io.hpp"
#include "uqfi/datagen.hpp"
#include "uqfi/dataset.hpp"
#include "uqfi/density.hpp"
#include "uqfi/errors.hpp"
#include "uqfi/experiment.hpp"
#include "uqfi/fitters.hpp"
#include "uqfi/importance.hpp"
#include "uqfi/json_io.hpp"
#include "uqfi/parallel.hpp"
#include "uqfi/predictor.hpp"
#include "uqfi/pruning.hpp"
#include "uqfi/rng.hpp"
