#pragma once

#include "odekit/adaptive.hpp"
#include "odekit/core.hpp"
#include "odekit/errors.hpp"
#include "odekit/io.hpp"
#include "odekit/linalg.hpp"
#include "odekit/multistep.hpp"
#include "odekit/problems.hpp"
#include "odekit/stability.hpp"
#include "odekit/steppers.hpp"
#include "odekit/study.hpp"
