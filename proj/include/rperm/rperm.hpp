#pragma once

#include "bijection.hpp"
#include "bregular.hpp"
#include "core.hpp"
#include "counting.hpp"
#include "cycindex.hpp"
#include "io.hpp"
#include "numeric.hpp"
#include "permanent.hpp"
#include "series.hpp"
#include "stats.hpp"
#include "stein.hpp"
#include "verify.hpp"
#include "version.hpp"
