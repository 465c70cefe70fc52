#pragma once

#include "smartskin/envelope.hpp"
#include "smartskin/error.hpp"
#include "smartskin/external_plant.hpp"
#include "smartskin/format.hpp"
#include "smartskin/geometry.hpp"
#include "smartskin/measurement.hpp"
#include "smartskin/mds.hpp"
#include "smartskin/objective.hpp"
#include "smartskin/optimizer.hpp"
#include "smartskin/oracle.hpp"
#include "smartskin/parametric.hpp"
#include "smartskin/pattern.hpp"
#include "smartskin/plant.hpp"
#include "smartskin/pod.hpp"
#include "smartskin/protocol.hpp"
#include "smartskin/seed.hpp"
#include "smartskin/surrogate.hpp"
