#ifndef RANK1_RANK1_HPP
#define RANK1_RANK1_HPP

#include "rank1/error.hpp"
#include "rank1/tensor.hpp"
#include "rank1/tensor_io.hpp"
#include "rank1/random.hpp"
#include "rank1/matrix.hpp"
#include "rank1/poly_roots.hpp"
#include "rank1/optimizer.hpp"
#include "rank1/critical.hpp"
#include "rank1/family.hpp"
#include "rank1/verify.hpp"

#endif  // RANK1_RANK1_HPP
