#pragma once

#include "sloane_gap/analysis.hpp"
#include "sloane_gap/classes.hpp"
#include "sloane_gap/commands.hpp"
#include "sloane_gap/errors.hpp"
#include "sloane_gap/gap.hpp"
#include "sloane_gap/ingest.hpp"
#include "sloane_gap/stats.hpp"
#include "sloane_gap/synth.hpp"
#include "sloane_gap/version.hpp"
