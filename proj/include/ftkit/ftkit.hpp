#pragma once

// Umbrella header.

#include "ftkit/bdd.hpp"
#include "ftkit/document.hpp"
#include "ftkit/error.hpp"
#include "ftkit/event_models.hpp"
#include "ftkit/fault_tree.hpp"
#include "ftkit/normalize.hpp"
#include "ftkit/qualitative.hpp"
#include "ftkit/quantify.hpp"
#include "ftkit/report.hpp"
