#pragma once

// Umbrella header.

#include "retinoblob/blob.hpp"
#include "retinoblob/cascade.hpp"
#include "retinoblob/commands.hpp"
#include "retinoblob/config.hpp"
#include "retinoblob/enhancement.hpp"
#include "retinoblob/error.hpp"
#include "retinoblob/evaluation.hpp"
#include "retinoblob/image.hpp"
#include "retinoblob/io.hpp"
#include "retinoblob/morphology.hpp"
#include "retinoblob/pipeline.hpp"
#include "retinoblob/postprocess.hpp"
#include "retinoblob/segmentation.hpp"
#include "retinoblob/synth.hpp"
