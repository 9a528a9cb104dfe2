#pragma once

// Umbrella header.

#include "vanet/adversary.hpp"
#include "vanet/analytics.hpp"
#include "vanet/config.hpp"
#include "vanet/crypto.hpp"
#include "vanet/experiments.hpp"
#include "vanet/identity.hpp"
#include "vanet/mobility.hpp"
#include "vanet/netsim.hpp"
#include "vanet/protocol.hpp"
#include "vanet/scenario.hpp"
#include "vanet/schemes.hpp"
#include "vanet/stats.hpp"
#include "vanet/wire.hpp"
