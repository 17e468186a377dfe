#pragma once

#include <arcan/errors.hpp>
#include <arcan/scalar.hpp>
#include <arcan/jet.hpp>
#include <arcan/expr.hpp>
#include <arcan/parse.hpp>
#include <arcan/eval.hpp>
#include <arcan/linalg.hpp>
#include <arcan/homog.hpp>
#include <arcan/classify.hpp>
#include <arcan/polynomial.hpp>
#include <arcan/blowup.hpp>
#include <arcan/corpus.hpp>
#include <arcan/verify.hpp>
#include <arcan/io.hpp>
