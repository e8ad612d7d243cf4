#pragma once

// Umbrella header for the driven-cavity / TLS-bath fluctuation toolkit.

#include "tlsqle/errors.hpp"
#include "tlsqle/model.hpp"
#include "tlsqle/steady_state.hpp"
#include "tlsqle/linear_response.hpp"
#include "tlsqle/spectrum.hpp"
#include "tlsqle/timedomain.hpp"
#include "tlsqle/welch.hpp"
#include "tlsqle/trajectory_io.hpp"
#include "tlsqle/hp_validation.hpp"
#include "tlsqle/selftest.hpp"
#include "tlsqle/config.hpp"
#include "tlsqle/output.hpp"
