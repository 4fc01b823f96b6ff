#pragma once

#include "opscale/binomial.hpp"
#include "opscale/cauchy.hpp"
#include "opscale/config.hpp"
#include "opscale/filtered_algebra.hpp"
#include "opscale/hermite.hpp"
#include "opscale/identities.hpp"
#include "opscale/models.hpp"
#include "opscale/operators.hpp"
#include "opscale/order_estimation.hpp"
#include "opscale/powers.hpp"
#include "opscale/product.hpp"
#include "opscale/reports.hpp"
#include "opscale/sobolev.hpp"
#include "opscale/spectrum.hpp"
#include "opscale/taylor.hpp"
#include "opscale/towers.hpp"
#include "opscale/triples.hpp"
#include "opscale/weyl.hpp"
