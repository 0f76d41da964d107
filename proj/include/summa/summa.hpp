#pragma once

#include "summa/diagnostics.hpp"
#include "summa/dyadic.hpp"
#include "summa/error.hpp"
#include "summa/extended_real.hpp"
#include "summa/monte_carlo.hpp"
#include "summa/sequences.hpp"
#include "summa/step_rv.hpp"
#include "summa/summability.hpp"
