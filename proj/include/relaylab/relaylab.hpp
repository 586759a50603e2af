// Umbrella header.
#pragma once

#include "relaylab/asymptotics.hpp"
#include "relaylab/bounds.hpp"
#include "relaylab/experiments.hpp"
#include "relaylab/kernel.hpp"
#include "relaylab/model.hpp"
#include "relaylab/optimizer.hpp"
#include "relaylab/schemes.hpp"
