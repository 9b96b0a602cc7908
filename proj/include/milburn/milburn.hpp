#pragma once

#include "milburn/errors.hpp"
#include "milburn/evolution.hpp"
#include "milburn/experiments.hpp"
#include "milburn/io.hpp"
#include "milburn/normal_modes.hpp"
#include "milburn/quantifiers.hpp"
#include "milburn/symplectic.hpp"
