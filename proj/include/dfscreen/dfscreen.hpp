#pragma once
#include <dfscreen/errors.hpp>
#include <dfscreen/linalg.hpp>
#include <dfscreen/links.hpp>
#include <dfscreen/screening.hpp>
#include <dfscreen/baselines.hpp>
#include <dfscreen/tuning.hpp>
#include <dfscreen/pipeline.hpp>
#include <dfscreen/simgen.hpp>
#include <dfscreen/predict.hpp>
