#pragma once

#include <gtest/gtest.h>

#include "slicing4meta/error.hpp"

template <typename F>
slicing4meta::Errc error_code(F&& f)
{
    try {
        f();
    } catch (const slicing4meta::Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected slicing4meta::Error";
    return slicing4meta::Errc::IoError;
}
