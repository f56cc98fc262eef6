#ifndef CHAINGEO_CHAINGEO_HPP
#define CHAINGEO_CHAINGEO_HPP

#include "chaingeo/algebra.hpp"
#include "chaingeo/blocking.hpp"
#include "chaingeo/chains.hpp"
#include "chaingeo/error.hpp"
#include "chaingeo/field.hpp"
#include "chaingeo/incidence.hpp"
#include "chaingeo/linalg.hpp"
#include "chaingeo/projline.hpp"
#include "chaingeo/quadric.hpp"
#include "chaingeo/ring_spec.hpp"
#include "chaingeo/search.hpp"

#endif  // CHAINGEO_CHAINGEO_HPP
