/*
 * Copyright (C) 2008 The Android Open Source Project
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 */

package android.view;

import android.hardware.input.InputManager;

/**
 * Describes the capabilities of a particular input device.
 */
public final class InputDevice {
    private int mId;
    private String mName;
    private int mVendorId;

    /**
     * Gets the ids of all input devices in the system.
     * @return The input device ids.
     */
    public static int[] getDeviceIds() {
        return InputManager.getInstance().getInputDeviceIds();
    }

    /**
     * Gets the input device id.
     * @return The input device id.
     */
    public int getId() {
        return mId;
    }

    /**
     * Returns true if the device is a virtual input device rather than a real one.
     */
    public boolean isVirtual() {
        return mId < 0;
    }

    private String describeSource(int source) {
        return "source " + source;
    }
}
