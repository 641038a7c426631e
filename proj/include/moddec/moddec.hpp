#pragma once

#include "moddec/index_set.hpp"
#include "moddec/syndrome_graph.hpp"
#include "moddec/gf2.hpp"
#include "moddec/blocks.hpp"
#include "moddec/network.hpp"
#include "moddec/noise.hpp"
#include "moddec/uf_decoder.hpp"
#include "moddec/modular.hpp"
#include "moddec/stats.hpp"
#include "moddec/io.hpp"
