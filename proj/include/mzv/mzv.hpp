#ifndef MZV_MZV_HPP
#define MZV_MZV_HPP

#include "mzv/asym.hpp"
#include "mzv/genfun.hpp"
#include "mzv/indices.hpp"
#include "mzv/linfit.hpp"
#include "mzv/mellin.hpp"
#include "mzv/ohno.hpp"
#include "mzv/parallel.hpp"
#include "mzv/series_eval.hpp"

#endif  // MZV_MZV_HPP
