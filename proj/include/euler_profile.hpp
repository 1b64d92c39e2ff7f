#pragma once

#include "euler_profile/errors.hpp"
#include "euler_profile/types.hpp"
#include "euler_profile/kernels.hpp"
#include "euler_profile/numerics.hpp"
#include "euler_profile/regime.hpp"
#include "euler_profile/curve.hpp"
#include "euler_profile/solver.hpp"
#include "euler_profile/oracle.hpp"
#include "euler_profile/io.hpp"
#include "euler_profile/verify.hpp"
