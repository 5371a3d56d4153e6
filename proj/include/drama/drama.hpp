#pragma once

#include "drama/actions.hpp"
#include "drama/affinity.hpp"
#include "drama/bus.hpp"
#include "drama/control_plane.hpp"
#include "drama/episode.hpp"
#include "drama/errors.hpp"
#include "drama/goal.hpp"
#include "drama/ids.hpp"
#include "drama/json_io.hpp"
#include "drama/lifecycle.hpp"
#include "drama/memory.hpp"
#include "drama/messages.hpp"
#include "drama/monitor.hpp"
#include "drama/resource.hpp"
#include "drama/rng.hpp"
#include "drama/scenario.hpp"
#include "drama/scheduler.hpp"
#include "drama/suite.hpp"
#include "drama/worker.hpp"
#include "drama/world.hpp"
