#pragma once

#include "sshkit/analytic.hpp"
#include "sshkit/compare.hpp"
#include "sshkit/errors.hpp"
#include "sshkit/format.hpp"
#include "sshkit/harvest.hpp"
#include "sshkit/models.hpp"
#include "sshkit/peaks.hpp"
#include "sshkit/rk4.hpp"
#include "sshkit/transient.hpp"
