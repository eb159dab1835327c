#pragma once

#include "tg/algebras.hpp"
#include "tg/catalog.hpp"
#include "tg/decomposition.hpp"
#include "tg/dilaton.hpp"
#include "tg/fibration_topology.hpp"
#include "tg/frame_change.hpp"
#include "tg/frame_tensor.hpp"
#include "tg/geometry.hpp"
#include "tg/io.hpp"
#include "tg/random_geometry.hpp"
#include "tg/report.hpp"
#include "tg/special_structures.hpp"
#include "tg/verifiers.hpp"
