package com.example.demo;

import android.content.res.TypedArray;
import android.os.Build;
import android.view.InputDevice;

import java.util.ArrayList;
import java.util.List;

public class DeviceList {
    private final List<String> names = new ArrayList<>();

    public void refresh(InputDevice device, TypedArray attrs) {
        // Behaviour of getDeviceIds differs between 15 and 16; nothing guards it.
        int[] ids = InputDevice.getDeviceIds();
        for (int id : ids) {
            // Removed after 15.
            names.add(InputDevice.getDeviceName(id));
        }
        if (Build.VERSION.SDK_INT >= Build.VERSION_CODES.JELLY_BEAN) {
            if (device.isVirtual()) {
                names.clear();
            }
        }
        if (Build.VERSION.SDK_INT >= 21) {
            boolean compact = attrs.getBoolean(0, false);
            if (compact) {
                names.clear();
            }
        }
    }
}
