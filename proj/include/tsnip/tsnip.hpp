// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <tsnip/cost_model.hpp>
#include <tsnip/error.hpp>
#include <tsnip/json_io.hpp>
#include <tsnip/labeling.hpp>
#include <tsnip/length_select.hpp>
#include <tsnip/mpdist.hpp>
#include <tsnip/partition.hpp>
#include <tsnip/scheduler.hpp>
#include <tsnip/series.hpp>
#include <tsnip/sliding_min.hpp>
#include <tsnip/snippets.hpp>
#include <tsnip/worker_pool.hpp>
#include <tsnip/zdist.hpp>
