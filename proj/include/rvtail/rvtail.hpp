#pragma once

#include "rvtail/error.hpp"
#include "rvtail/estimation.hpp"
#include "rvtail/io.hpp"
#include "rvtail/maps.hpp"
#include "rvtail/models.hpp"
#include "rvtail/random.hpp"
#include "rvtail/sample_batch.hpp"
#include "rvtail/scenarios.hpp"
#include "rvtail/spectral_measure.hpp"
#include "rvtail/sphere.hpp"
#include "rvtail/transforms.hpp"
