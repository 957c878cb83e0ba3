#ifndef FASWIPT_FASWIPT_HPP
#define FASWIPT_FASWIPT_HPP

#include "faswipt/ao.hpp"
#include "faswipt/beamforming.hpp"
#include "faswipt/channel.hpp"
#include "faswipt/config.hpp"
#include "faswipt/csv.hpp"
#include "faswipt/experiment.hpp"
#include "faswipt/position.hpp"
#include "faswipt/rng.hpp"
#include "faswipt/surrogate.hpp"
#include "faswipt/types.hpp"

#endif
