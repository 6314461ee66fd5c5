#pragma once

#include "nvmo/liegroup.hpp"
#include "nvmo/camera.hpp"
#include "nvmo/graph.hpp"
#include "nvmo/observer.hpp"
#include "nvmo/bounds.hpp"
#include "nvmo/sim.hpp"
#include "nvmo/scenario_io.hpp"
#include "nvmo/report.hpp"
