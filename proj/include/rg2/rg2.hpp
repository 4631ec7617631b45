#pragma once

#include "rg2/classify.hpp"
#include "rg2/flows.hpp"
#include "rg2/geometry.hpp"
#include "rg2/integrate.hpp"
#include "rg2/oracles.hpp"
#include "rg2/roots.hpp"
#include "rg2/validation.hpp"
