/*
 * Copyright (C) 2008 The Android Open Source Project
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 */

package android.view;

import android.os.RemoteException;
import android.view.IWindowManager;

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
        IWindowManager wm = Display.getWindowManager();
        try {
            return wm.getInputDeviceIds();
        } catch (RemoteException ex) {
            throw new RuntimeException("Could not get input device ids from Window Manager.", ex);
        }
    }

    /**
     * Gets the input device id.
     * @return The input device id.
     */
    public int getId() {
        return mId;
    }

    /**
     * Gets the name of the input device with the given id.
     */
    public static String getDeviceName(int id) {
        InputDevice device = getDevice(id);
        return device != null ? device.mName : null;
    }

    /**
     * Gets the vendor id for the given device, if available.
     */
    public int getVendorId() {
        return mVendorId;
    }

    private String describeSource(int source) {
        return "source " + source;
    }
}
