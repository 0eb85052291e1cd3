#ifndef CXORDER_CXORDER_HPP
#define CXORDER_CXORDER_HPP

#include "cxorder/error.hpp"
#include "cxorder/polynomial.hpp"
#include "cxorder/piecewise_polynomial.hpp"
#include "cxorder/measure.hpp"
#include "cxorder/ordering.hpp"
#include "cxorder/oracle.hpp"
#include "cxorder/quadrature.hpp"

#endif  // CXORDER_CXORDER_HPP
