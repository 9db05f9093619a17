#ifndef POINTSPEC_POINTSPEC_HPP
#define POINTSPEC_POINTSPEC_HPP

#include "asymptotic.hpp"
#include "criteria.hpp"
#include "errors.hpp"
#include "jacobi.hpp"
#include "krein_string.hpp"
#include "partition.hpp"
#include "potential.hpp"
#include "probes.hpp"
#include "sequence.hpp"
#include "spectral.hpp"
#include "verdict.hpp"
#include "weyl.hpp"

#endif
