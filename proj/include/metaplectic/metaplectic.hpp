#pragma once

#include "metaplectic/error.hpp"
#include "metaplectic/symplectic.hpp"
#include "metaplectic/sigspace.hpp"
#include "metaplectic/fourier_sum.hpp"
#include "metaplectic/transform.hpp"
#include "metaplectic/convolution.hpp"
#include "metaplectic/classical.hpp"
#include "metaplectic/filter.hpp"
#include "metaplectic/io.hpp"
#include "metaplectic/suite.hpp"
