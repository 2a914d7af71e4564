#pragma once

#include "firenose/csv.hpp"
#include "firenose/dataset.hpp"
#include "firenose/error.hpp"
#include "firenose/featex.hpp"
#include "firenose/knn.hpp"
#include "firenose/metrics.hpp"
#include "firenose/pca.hpp"
#include "firenose/pipeline.hpp"
#include "firenose/pnn.hpp"
#include "firenose/synth.hpp"
#include "firenose/types.hpp"
