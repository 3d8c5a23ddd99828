#pragma once

#include "rfcover/bench.hpp"
#include "rfcover/classifier.hpp"
#include "rfcover/common.hpp"
#include "rfcover/ddrf.hpp"
#include "rfcover/features.hpp"
#include "rfcover/kernel_baseline.hpp"
#include "rfcover/optimizer.hpp"
#include "rfcover/scenario.hpp"
