#pragma once

#include <gtest/gtest.h>

#include "generators.hpp"
