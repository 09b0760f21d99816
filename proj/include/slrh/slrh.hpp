// Everything at once.
#pragma once

#include "slrh/cli.hpp"
#include "slrh/generator.hpp"
#include "slrh/oracle.hpp"
#include "slrh/pipeline.hpp"
#include "slrh/property_suite.hpp"
