#pragma once

#include "asymptote/builtins.hpp"
#include "asymptote/construction.hpp"
#include "asymptote/curve.hpp"
#include "asymptote/error.hpp"
#include "asymptote/fourier.hpp"
#include "asymptote/framing.hpp"
#include "asymptote/invariants.hpp"
#include "asymptote/io.hpp"
#include "asymptote/parallel.hpp"
#include "asymptote/projection.hpp"
#include "asymptote/quadrature.hpp"
#include "asymptote/report.hpp"
#include "asymptote/reproduce.hpp"
#include "asymptote/roots.hpp"
#include "asymptote/series.hpp"
