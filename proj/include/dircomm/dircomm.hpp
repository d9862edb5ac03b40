#pragma once

#include "dircomm/dynamics.hpp"
#include "dircomm/error.hpp"
#include "dircomm/graph.hpp"
#include "dircomm/meanfield.hpp"
#include "dircomm/metrics.hpp"
#include "dircomm/params.hpp"
#include "dircomm/phase.hpp"
#include "dircomm/rng.hpp"
