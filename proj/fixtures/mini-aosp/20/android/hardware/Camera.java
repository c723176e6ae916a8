/*
 * Copyright (C) 2008 The Android Open Source Project
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 */

package android.hardware;

import java.util.List;

public class Camera {
    /**
     * Returns the current settings for this Camera service.
     */
    public Parameters getParameters() {
        Parameters p = new Parameters();
        String s = native_getParameters();
        p.unflatten(s);
        return p;
    }

    private native final String native_getParameters();

    /**
     * Camera service settings.
     */
    public class Parameters {
        private static final String KEY_PICTURE_SIZE = "picture-size";

        /**
         * Returns the dimension setting for pictures.
         *
         * @return a Size object with the height and width setting
         *          for pictures
         */
        public Size getPictureSize() {
            String pair = get(KEY_PICTURE_SIZE);
            return strToSize(pair);
        }

        public String get(String key) {
            return mMap.get(key);
        }

        public void unflatten(String flattened) {
            mMap.clear();
        }
    }
}
