#ifndef NEVPICK_NEVPICK_HPP
#define NEVPICK_NEVPICK_HPP

#include "nevpick/algebras.hpp"
#include "nevpick/core.hpp"
#include "nevpick/corona.hpp"
#include "nevpick/kernels.hpp"
#include "nevpick/linalg.hpp"
#include "nevpick/oracles.hpp"
#include "nevpick/pick.hpp"
#include "nevpick/polynomial.hpp"
#include "nevpick/realization.hpp"
#include "nevpick/truncation.hpp"

#endif  // NEVPICK_NEVPICK_HPP
